from .binary_exporter import export_cube, export_iq
from .csv_exporter import CsvExporter
from .errors import ExportError
from .json_exporter import JsonExporter
