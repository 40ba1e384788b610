"""Infrastructure layer - Technical implementations of domain interfaces."""