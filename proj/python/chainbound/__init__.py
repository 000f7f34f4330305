from ._chainbound import *  # noqa: F401,F403
from ._chainbound import __doc__  # noqa: F401
