from django.urls import path

from commute.views import (
    CertificateListView,
    ClassifyView,
    CosetsView,
    PoincareView,
    RecheckView,
    TableVerifyView,
)

app_name = "commute"

urlpatterns = [
    path("classify/", ClassifyView.as_view(), name="classify"),
    path("cosets/", CosetsView.as_view(), name="cosets"),
    path("poincare/", PoincareView.as_view(), name="poincare"),
    path("table/verify/", TableVerifyView.as_view(), name="table-verify"),
    path("certificates/", CertificateListView.as_view(), name="certificates"),
    path("certificates/recheck/", RecheckView.as_view(), name="certificate-recheck"),
]
