import sys

from swarm_bmc.cli.main import main

if __name__ == "__main__":
    sys.exit(main())
