# Shared memo store for skein reductions
