from background_task.models import Task
from django.urls import reverse
from rest_framework import status
from rest_framework.test import APITestCase

from coxeter.diagram import parse_diagram
from commute.models import CertificateRecord, save_certificate
from commute.table import find_row, load_table
from commute.verifiers import verify_cor26, verify_table_row


class ClassifyApiTests(APITestCase):
    def test_classify(self) -> None:
        response = self.client.post(
            reverse("commute:classify"), {"diagram": "E6", "remove": ["2"]}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["verdict"], "commutative")
        self.assertEqual(response.data["rule"], "spherical-list")

    def test_remove_or_subset_required(self) -> None:
        response = self.client.post(reverse("commute:classify"), {"diagram": "E6"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_bad_diagram(self) -> None:
        response = self.client.post(
            reverse("commute:classify"), {"diagram": "Q4", "remove": ["1"]}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["error"], "invalid_diagram")

    def test_non_spherical_subset(self) -> None:
        response = self.client.post(
            reverse("commute:classify"), {"diagram": "~A2", "remove": []}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["error"], "non_spherical")


class GroupApiTests(APITestCase):
    def test_cosets(self) -> None:
        response = self.client.post(
            reverse("commute:cosets"), {"diagram": "A3", "remove": ["2"]}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual([r["left_quotient_size"] for r in response.data], [1, 4, 1])
        self.assertEqual([r["coset_size"] for r in response.data], [4, 16, 4])

    def test_cosets_of_infinite_group_need_bound(self) -> None:
        url = reverse("commute:cosets")
        response = self.client.post(url, {"diagram": "~A2", "remove": ["0"]}, format="json")
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        response = self.client.post(
            url, {"diagram": "~A2", "remove": ["0"], "max_length": 4}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)

    def test_poincare(self) -> None:
        response = self.client.post(reverse("commute:poincare"), {"diagram": "A2"}, format="json")
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["polynomial"], "1 + 2*q + 2*q^2 + q^3")
        self.assertEqual(response.data["variables"], {"q": ["1", "2"]})


class TableApiTests(APITestCase):
    def test_verify_row(self) -> None:
        response = self.client.post(
            reverse("commute:table-verify"), {"row": "F_{4,2}"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data["verdict"], "noncommutative")
        self.assertEqual(CertificateRecord.objects.count(), 1)

    def test_verify_family_instance(self) -> None:
        response = self.client.post(
            reverse("commute:table-verify"),
            {"row": "D_{n,i}", "params": {"n": 5, "i": 3}},
            format="json",
        )
        self.assertEqual(response.status_code, status.HTTP_201_CREATED)
        self.assertEqual(response.data["case"], "D_{5,3}")

    def test_unknown_row(self) -> None:
        response = self.client.post(
            reverse("commute:table-verify"), {"row": "Z_{1,1}"}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)
        self.assertEqual(response.data["error"], "malformed_table")

    def test_background_run_is_queued(self) -> None:
        response = self.client.post(
            reverse("commute:table-verify"),
            {"row": "H_{3,2}", "background": True},
            format="json",
        )
        self.assertEqual(response.status_code, status.HTTP_202_ACCEPTED)
        self.assertEqual(response.data, {"status": "queued", "row": "H_{3,2}"})
        self.assertEqual(Task.objects.count(), 1)
        self.assertEqual(CertificateRecord.objects.count(), 0)


class CertificateApiTests(APITestCase):
    def setUp(self) -> None:
        rows = load_table()
        self.heap = save_certificate(verify_table_row(find_row(rows, "F_{4,2}")))
        d = parse_diagram("B2")
        self.open = save_certificate(verify_cor26(d, d.subset(["2"]), "1", "2", "1"))

    def test_list_and_filter(self) -> None:
        url = reverse("commute:certificates")
        response = self.client.get(url)
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["count"], 2)

        response = self.client.get(url, {"verdict": "inconclusive"})
        self.assertEqual(response.data["count"], 1)
        self.assertEqual(response.data["results"][0]["method"], "cor2.6")

    def test_recheck(self) -> None:
        certificate = self.heap.to_certificate().to_dict()
        response = self.client.post(
            reverse("commute:certificate-recheck"), {"certificate": certificate}, format="json"
        )
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertTrue(response.data["reproduced"])
        self.assertEqual(response.data["verdict"], "noncommutative")

    def test_recheck_rejects_malformed_certificate(self) -> None:
        response = self.client.post(
            reverse("commute:certificate-recheck"),
            {"certificate": {"case": "x"}},
            format="json",
        )
        self.assertEqual(response.status_code, status.HTTP_400_BAD_REQUEST)

    def test_record_round_trip(self) -> None:
        record = CertificateRecord.objects.get(id=self.heap.id)
        cert = record.to_certificate()
        self.assertEqual(cert.case, "F_{4,2}")
        self.assertEqual(cert.subset, ("1", "3", "4"))
        self.assertEqual(str(record), "F_{4,2}: noncommutative")


class HealthApiTests(APITestCase):
    def test_health(self) -> None:
        response = self.client.get(reverse("health-check"))
        self.assertEqual(response.status_code, status.HTTP_200_OK)
        self.assertEqual(response.data["status"], "healthy")
