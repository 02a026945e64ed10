import os
from unittest import mock

from django.test import SimpleTestCase
from rest_framework import status
from rest_framework.exceptions import NotFound

from core.config import Config
from core.exceptions import (
    DiagramParseError,
    InvariantViolation,
    NonSphericalError,
    custom_exception_handler,
)
from coxeter.diagram import parse_diagram


class ConfigTests(SimpleTestCase):
    def test_defaults(self) -> None:
        with mock.patch.dict(os.environ, {}, clear=True):
            config = Config()
        self.assertEqual(config.BRUHAT_GUARD, 1_000_000)
        self.assertEqual(config.THREADS, 1)
        self.assertEqual(config.TABLE_PATH.name, "witnesses.table")

    def test_environment_overrides(self) -> None:
        env = {
            "HECKE_BRUHAT_GUARD": "50_000",
            "HECKE_THREADS": "0",
            "HECKE_SCAN_MAX_LENGTH": "oops",
            "HECKE_LOG_LEVEL": "debug",
            "HECKE_TABLE_PATH": "/tmp/rows.table",
        }
        with mock.patch.dict(os.environ, env, clear=True):
            config = Config()
        self.assertEqual(config.BRUHAT_GUARD, 50_000)
        self.assertEqual(config.THREADS, 1)
        self.assertEqual(config.SCAN_MAX_LENGTH, 8)
        self.assertEqual(config.LOG_LEVEL, "DEBUG")
        self.assertEqual(str(config.TABLE_PATH), "/tmp/rows.table")


class ExceptionHandlerTests(SimpleTestCase):
    def test_domain_errors_are_bad_requests(self) -> None:
        d = parse_diagram("~A2")
        error = NonSphericalError("not spherical", offending=d.nodes)
        response = custom_exception_handler(error, {})
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["error"], "non_spherical")
        self.assertEqual(len(response.data["details"]["offending"]), 3)

    def test_invariant_violation_is_server_error(self) -> None:
        response = custom_exception_handler(InvariantViolation("broken"), {})
        self.assertEqual(response.status_code, status.HTTP_500_INTERNAL_SERVER_ERROR)
        self.assertEqual(response.data["error"], "invariant_violation")

    def test_framework_errors_pass_through(self) -> None:
        response = custom_exception_handler(NotFound(), {})
        self.assertEqual(response.status_code, status.HTTP_404_NOT_FOUND)

    def test_error_payload(self) -> None:
        payload = DiagramParseError("bad", spec="Q4").as_dict()
        self.assertEqual(payload, {"error": "invalid_diagram", "message": "bad", "details": {"spec": "Q4"}})
