"""Command handlers for the experiment use cases."""

from .run_replication import ReplicationSeeds, RunReplicationCommand, RunReplicationHandler
from .run_experiment import RunExperimentCommand, RunExperimentHandler

__all__ = [
    "ReplicationSeeds",
    "RunReplicationCommand",
    "RunReplicationHandler",
    "RunExperimentCommand",
    "RunExperimentHandler",
]
