from .charts import emit_charts
from .harness import (ALGORITHMS, PAPER_RANKS, SUMMARY_RANK, ExperimentRecord, RunConfig,
                      cell_seed, run_cell, run_sweep)
from .report import emit_csv, emit_summary_tables, read_csv, verify_records
