try:
    from ._het import *  # noqa: F401,F403
    from ._het import __version__  # noqa: F401
except ImportError:  # in-tree builds place the extension on sys.path directly
    from _het import *  # noqa: F401,F403
    from _het import __version__  # noqa: F401
