"""Linear-program solvers: phase-one feasibility and transportation."""
