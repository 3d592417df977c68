import sys

from majorana.cli import main

# Start
if __name__ == "__main__":
    sys.exit(main())
