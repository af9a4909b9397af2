from .commands import build_parser, run
