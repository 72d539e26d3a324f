"""Graph symmetry, adjacency-spectrum friendliness and leader-follower controllability."""

__version__ = "0.1.0"
