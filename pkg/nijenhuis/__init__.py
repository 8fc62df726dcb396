VERSION = (0, 1)

__version__ = '.'.join(str(part) for part in VERSION)
