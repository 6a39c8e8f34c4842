"""
Main entry point for the quadsbox module.
"""

from .cli import main

if __name__ == "__main__":
    main()
