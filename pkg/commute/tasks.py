import logging
from uuid import UUID

from background_task import background

from core.exceptions import HeckeError
from commute.models import CertificateRecord, save_certificate
from commute.recheck import recheck
from commute.table import find_row, load_table
from commute.verifiers import verify_table_row

logger = logging.getLogger(__name__)


def run_table_row(row_id: str, params: dict[str, int] | None = None) -> CertificateRecord:
    row = find_row(load_table(), row_id)
    return save_certificate(verify_table_row(row, params or None))


@background(schedule=0)
def verify_table_row_task(row_id: str, params: dict[str, int] | None = None) -> None:
    try:
        record = run_table_row(row_id, params)
    except HeckeError as e:
        logger.error(f"Background verification of {row_id} failed: {e.message}")
        return
    logger.info(f"Row {row_id} verified in background: {record.verdict}")


@background(schedule=0)
def recheck_certificate_task(record_id: str | UUID) -> None:
    try:
        record = CertificateRecord.objects.get(id=record_id)
    except CertificateRecord.DoesNotExist:
        logger.warning("Certificate not found")
        return

    result = recheck(record.to_certificate())
    record.rechecked = result.reproduced
    record.save(update_fields=["rechecked"])
    logger.info(f"Certificate {record_id} re-checked, reproduced: {result.reproduced}")
