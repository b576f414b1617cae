"""Structure learning for tree-shaped discrete models under unknown symmetric noise."""

from ._noisytree import *  # noqa: F401,F403
from ._noisytree import __doc__  # noqa: F401

__version__ = "0.1.0"
