from .decoding import DecodeOutcome, decision_directed_noise, demod_decode_reencode
from .equalization import mrc_combine, zf_equalize
from .estimation import CommCfr, DegeneratePilotError, estimate_cfr
