from typing import Any

from django.core.management.base import BaseCommand, CommandError, CommandParser

from commute.cli import EXIT_OK, add_arguments, execute


class Command(BaseCommand):
    help = "Classify, scan and certify commutativity of parabolic Hecke algebras"

    def add_arguments(self, parser: CommandParser) -> None:
        add_arguments(parser)

    def handle(self, *args: Any, **options: Any) -> None:
        output, code = execute(options)
        self.stdout.write(output)
        if code != EXIT_OK:
            raise CommandError("inconclusive verdict", returncode=code)
