"""Interpolative decompositions by column-pivoted QR and randomized column sampling."""
from .dense import (PivotedQr, SvdResult, frobenius_norm, matmul, qr_column_pivoted,
                    solve_posdef, solve_symmetric_indefinite, solve_triangular, svd,
                    truncated_svd_error)
from .errors import (ConvergenceError, IdxFormatError, InvalidArgumentError,
                     MatrixMarketParseError, NotPositiveDefiniteError, SingularMatrixError)
from .id import IdDiagnostics, IdResult, diagnostics, id_auto, optim_id, optim_rid

__version__ = "0.1.0"
