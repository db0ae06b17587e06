"""Laboratory for a locally checkable labeling problem that separates shared
from private randomness in the LOCAL model."""

__version__ = "0.1.0"
