"""Allow ``python -m channel_compare``."""

from .cli.interface import main

if __name__ == "__main__":
    main()
