# Coefficient ring, combinatorics, skein engine, solver and checks
