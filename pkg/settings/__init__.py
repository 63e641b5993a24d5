# Environment-driven settings
