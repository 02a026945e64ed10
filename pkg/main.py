import os
import sys


def main() -> None:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "backend.settings")
    from commute.cli import run

    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
