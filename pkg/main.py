"""应用入口点"""

import sys

from src.getain.app import main

if __name__ == "__main__":
    sys.exit(main())
