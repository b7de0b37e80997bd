"""Allow running sullivanloops as a module: python -m sullivanloops."""

from sullivanloops.main import cli

if __name__ == "__main__":
    cli(prog_name="sullivanloops")
