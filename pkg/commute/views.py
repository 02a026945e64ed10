import logging

from django_filters.rest_framework import DjangoFilterBackend
from drf_spectacular.utils import extend_schema, extend_schema_view
from rest_framework import status
from rest_framework.generics import ListAPIView
from rest_framework.pagination import PageNumberPagination
from rest_framework.request import Request
from rest_framework.response import Response
from rest_framework.views import APIView

from coxeter.diagram import parse_diagram
from coxeter.group import CoxeterGroup
from hecke.polynomials import ParamRing, format_polynomial, poincare_polynomial
from commute.certificates import Certificate
from commute.classification import classify, select_subset
from commute.models import CertificateRecord
from commute.recheck import recheck
from commute.serializers import (
    CertificateRecordSerializer,
    ClassificationResponseSerializer,
    CosetsRequestSerializer,
    DiagramRequestSerializer,
    DoubleCosetSerializer,
    ErrorResponseSerializer,
    PoincareRequestSerializer,
    PoincareResponseSerializer,
    QueuedResponseSerializer,
    RecheckRequestSerializer,
    RecheckResponseSerializer,
    TableVerifyRequestSerializer,
)
from commute.tasks import run_table_row, verify_table_row_task

logger = logging.getLogger(__name__)


class CertificatePagination(PageNumberPagination):
    page_size = 20


@extend_schema_view(
    post=extend_schema(
        summary="Classify a parabolic algebra",
        description="Known commutativity answer with the rule that decides it",
        request=DiagramRequestSerializer,
        responses={200: ClassificationResponseSerializer, 400: ErrorResponseSerializer},
        tags=["commute"],
    )
)
class ClassifyView(APIView):
    def post(self, request: Request) -> Response:
        serializer = DiagramRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        result = classify(data["diagram"], data.get("remove"), data.get("subset"))
        return Response(result.to_dict())


@extend_schema_view(
    post=extend_schema(
        summary="Double cosets of a parabolic subgroup",
        description="Minimal representatives of W_I\\W/W_I with stabilizers and sizes",
        request=CosetsRequestSerializer,
        responses={200: DoubleCosetSerializer(many=True), 400: ErrorResponseSerializer},
        tags=["commute"],
    )
)
class CosetsView(APIView):
    def post(self, request: Request) -> Response:
        serializer = CosetsRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        d = parse_diagram(data["diagram"])
        chosen = select_subset(d, data.get("remove"), data.get("subset"))
        records = CoxeterGroup(d).double_cosets(chosen, data.get("max_length"))
        payload = [
            {
                "min_rep": str(r.min_rep),
                "length": r.min_rep.length,
                "stabilizer_subset": d.format_subset(r.stabilizer_subset),
                "coset_size": r.coset_size,
                "left_quotient_size": r.left_quotient_size,
                "involution": r.involution,
            }
            for r in records
        ]
        return Response(DoubleCosetSerializer(payload, many=True).data)


@extend_schema_view(
    post=extend_schema(
        summary="Poincare polynomial",
        description="W_J(q) with one variable per conjugacy class of generators",
        request=PoincareRequestSerializer,
        responses={200: PoincareResponseSerializer, 400: ErrorResponseSerializer},
        tags=["commute"],
    )
)
class PoincareView(APIView):
    def post(self, request: Request) -> Response:
        serializer = PoincareRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        d = parse_diagram(data["diagram"])
        chosen = d.subset(data["subset"]) if "subset" in data else frozenset(d.nodes)
        params = ParamRing(d)
        return Response(
            {
                "diagram": d.name or d.to_spec(),
                "subset": d.format_subset(chosen),
                "polynomial": format_polynomial(poincare_polynomial(d, chosen), params.names),
                "variables": params.class_labels,
            }
        )


@extend_schema_view(
    post=extend_schema(
        summary="Verify a witness table row",
        description="Runs the row's certificate and stores it; with background=true the run is queued",
        request=TableVerifyRequestSerializer,
        responses={
            201: CertificateRecordSerializer,
            202: QueuedResponseSerializer,
            400: ErrorResponseSerializer,
        },
        tags=["commute"],
    )
)
class TableVerifyView(APIView):
    def post(self, request: Request) -> Response:
        serializer = TableVerifyRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        data = serializer.validated_data
        params = data.get("params")
        if data["background"]:
            verify_table_row_task(data["row"], params)
            logger.info(f"Queued verification of row {data['row']}")
            return Response(
                {"status": "queued", "row": data["row"]}, status=status.HTTP_202_ACCEPTED
            )
        record = run_table_row(data["row"], params)
        return Response(
            CertificateRecordSerializer(record).data, status=status.HTTP_201_CREATED
        )


@extend_schema_view(
    get=extend_schema(
        summary="Stored certificates",
        description="Filter by verdict, method or case",
        tags=["commute"],
    )
)
class CertificateListView(ListAPIView):
    queryset = CertificateRecord.objects.all()
    serializer_class = CertificateRecordSerializer
    pagination_class = CertificatePagination
    filter_backends = [DjangoFilterBackend]
    filterset_fields = ["verdict", "method", "case"]


@extend_schema_view(
    post=extend_schema(
        summary="Re-check a certificate",
        description="Re-verifies a certificate from its recorded evidence",
        request=RecheckRequestSerializer,
        responses={200: RecheckResponseSerializer, 400: ErrorResponseSerializer},
        tags=["commute"],
    )
)
class RecheckView(APIView):
    def post(self, request: Request) -> Response:
        serializer = RecheckRequestSerializer(data=request.data)
        serializer.is_valid(raise_exception=True)
        cert = Certificate.from_dict(serializer.validated_data["certificate"])
        return Response(recheck(cert).to_dict())
