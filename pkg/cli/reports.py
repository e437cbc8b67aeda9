# reports.py - Rapport CSV d'un balayage en dimension
import csv
import io
from pathlib import Path

SWEEP_HEADER = ("N", "lower_bound", "restarts_used", "rounds", "wall_time_seconds")


def sweep_rows(rows, wall_time=True):
    for row in rows:
        yield (
            row.total_dim,
            f"{row.lower_bound:.12f}",
            row.restarts_used,
            row.rounds,
            f"{row.wall_time_seconds if wall_time else 0.0:.3f}",
        )


def sweep_csv(rows, wall_time=True):
    """
    En-tête fixe puis une ligne par dimension. Sans `wall_time`, la dernière
    colonne vaut 0.000 : deux exécutions de même graine donnent le même fichier.
    """
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    writer.writerows(sweep_rows(rows, wall_time))
    return buffer.getvalue()


def write_sweep_report(path, rows, wall_time=True):
    Path(path).write_text(sweep_csv(rows, wall_time), encoding="utf-8")
