from ._zenochain import *  # noqa: F401,F403
