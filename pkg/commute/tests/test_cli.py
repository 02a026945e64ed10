import json
import os
import subprocess
import sys
from contextlib import redirect_stderr, redirect_stdout
from io import StringIO

from django.core.management import call_command
from django.core.management.base import CommandError
from django.conf import settings
from django.test import SimpleTestCase, TestCase, tag

from commute.cli import EXIT_ERROR, EXIT_INCONCLUSIVE, EXIT_OK, run
from commute.models import CertificateRecord


def hecke(*args: str) -> str:
    out = StringIO()
    call_command("hecke", *args, stdout=out)
    return out.getvalue()


class CommandTests(SimpleTestCase):
    def test_classify(self) -> None:
        payload = json.loads(hecke("classify", "--diagram", "E6", "--remove", "2"))
        self.assertEqual(payload["verdict"], "commutative")
        self.assertEqual(payload["rule"], "spherical-list")

    def test_classify_text(self) -> None:
        output = hecke("classify", "--diagram", "H3", "--remove", "2", "--format", "text")
        self.assertIn("noncommutative", output)

    def test_verify_table_row(self) -> None:
        payload = json.loads(hecke("verify-table", "--row", "H_{4,4}"))
        self.assertEqual(payload["case"], "H_{4,4}")
        self.assertEqual(payload["verdict"], "noncommutative")

    def test_verify_family_instance(self) -> None:
        payload = json.loads(hecke("verify-table", "--row", "D_{n,i}", "--params", "n=6,i=4"))
        self.assertEqual(payload["case"], "D_{6,4}")

    def test_cosets(self) -> None:
        rows = json.loads(hecke("cosets", "--diagram", "A3", "--remove", "2"))
        self.assertEqual([r["min_rep"] for r in rows], ["e", "2", "2 1 3 2"])
        self.assertEqual([r["left_quotient_size"] for r in rows], [1, 4, 1])

    def test_poincare_text(self) -> None:
        output = hecke("poincare", "--diagram", "A2", "--format", "text")
        self.assertEqual(output.strip(), "1 + 2*q + 2*q^2 + q^3")

    def test_involutions(self) -> None:
        payload = json.loads(hecke("involutions", "--diagram", "A2", "--remove", "1"))
        self.assertEqual(payload["total"], 3)

    def test_certify_path(self) -> None:
        payload = json.loads(hecke("certify", "--method", "claim1", "--diagram", "A3", "--subset", "2"))
        self.assertEqual(payload["verdict"], "noncommutative")

    def test_lift(self) -> None:
        payload = json.loads(hecke("lift", "--row", "F_{4,2}", "--target", "F4"))
        self.assertEqual(payload["method"], "lift")

    def test_inconclusive_exit_code(self) -> None:
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command(
                "hecke", "certify", "--diagram", "B2", "--subset", "2",
                "--u-word", "1", "--z-word", "2", "--v-word", "1", stdout=out,
            )
        self.assertEqual(caught.exception.returncode, EXIT_INCONCLUSIVE)
        self.assertEqual(json.loads(out.getvalue())["verdict"], "inconclusive")

    def test_unknown_option_is_an_error(self) -> None:
        with self.assertRaises(CommandError) as caught:
            hecke("classify", "--diagram", "E6", "--bogus")
        self.assertEqual(caught.exception.returncode, EXIT_ERROR)

    def test_error_exit_code(self) -> None:
        cases = [
            ("classify", "--diagram", "Q4", "--remove", "1"),
            ("classify", "--remove", "1"),
            ("classify", "--diagram", "A3"),
            ("verify-table", "--row", "Z_{1,1}"),
            ("lift", "--row", "F_{4,2}"),
            ("certify", "--method", "prop2.7", "--diagram", "F4", "--remove", "2"),
            ("involutions", "--diagram", "A3", "--remove", "1,2"),
        ]
        for args in cases:
            with self.subTest(args=args), self.assertRaises(CommandError) as caught:
                hecke(*args)
            self.assertEqual(caught.exception.returncode, EXIT_ERROR)


class SaveTests(TestCase):
    def test_save_stores_certificates(self) -> None:
        hecke("certify", "--method", "claim1", "--diagram", "A3", "--subset", "2", "--save")
        record = CertificateRecord.objects.get()
        self.assertEqual(record.method, "claim1")
        self.assertEqual(record.verdict, "noncommutative")


class RunTests(SimpleTestCase):
    def run_quietly(self, *args: str) -> tuple[int, str]:
        out, err = StringIO(), StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run(list(args))
        return code, out.getvalue() + err.getvalue()

    def test_exit_codes(self) -> None:
        self.assertEqual(self.run_quietly("classify", "--diagram", "E6", "--remove", "2")[0], EXIT_OK)
        code, output = self.run_quietly(
            "certify", "--diagram", "B2", "--subset", "2", "--u-word", "1", "--z-word", "2", "--v-word", "1"
        )
        self.assertEqual(code, EXIT_INCONCLUSIVE)
        self.assertIn("inconclusive", output)

    def test_usage_errors_exit_one(self) -> None:
        for args in [("classify", "--bogus"), ("frobnicate",), ()]:
            with self.subTest(args=args):
                self.assertEqual(self.run_quietly(*args)[0], EXIT_ERROR)


@tag("slow")
class EntryPointTests(SimpleTestCase):
    def test_main_without_settings_variable(self) -> None:
        env = {k: v for k, v in os.environ.items() if k != "DJANGO_SETTINGS_MODULE"}
        result = subprocess.run(
            [sys.executable, "main.py", "classify", "--diagram", "E6", "--remove", "2"],
            cwd=settings.BASE_DIR,
            env=env,
            capture_output=True,
            text=True,
            check=False,
        )
        self.assertEqual(result.returncode, EXIT_OK, result.stderr)
        self.assertEqual(json.loads(result.stdout)["verdict"], "commutative")
