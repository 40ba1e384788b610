"""
causalrep - causality-aware counterfactual deconfounding of learned features.

Trains a small network on colored MNIST whose color/label coupling shifts
between training and test, removes the color contribution from the learned
features by linear regression, and compares the result with no adjustment and
with rotation-based SMOTE balancing.
"""

__version__ = "1.0.0"
