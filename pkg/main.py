import logging
import sys

from command_console import CommandConsole

logger = logging.getLogger(__name__)


def main(argv=None):
    """Main entry point"""
    console = CommandConsole()
    return console.run(argv)


if __name__ == "__main__":
    sys.exit(main())
