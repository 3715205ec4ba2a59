#  8888888b.   .d8888b.  8888888b.
#  888  "Y88b d88P  Y88b 888   Y88b
#  888    888 888    888 888    888
#  888    888 888        888   d88P
#  888    888 888  88888 8888888P"
#  888    888 888    888 888 T88b
#  888  .d88P Y88b  d88P 888  T88b
#  8888888P"   "Y8888P88 888   T88b

VERSION = (0, 2, 0)

__version__ = '.'.join(map(str, VERSION))
