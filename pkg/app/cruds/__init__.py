# app/cruds/__init__.py
from .network import NetworkCRUD, network_crud
from .partition import PartitionCRUD, partition_crud
from .report import ReportCRUD, report_crud

__all__ = [
    "NetworkCRUD", "network_crud",
    "PartitionCRUD", "partition_crud",
    "ReportCRUD", "report_crud",
]
