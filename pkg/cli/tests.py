import json
import tempfile
from fractions import Fraction
from io import StringIO
from pathlib import Path
from unittest import mock

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase, override_settings, tag

from adaptation.models import AdaptationReceipt
from construction.builders import build_enlg
from construction.catalog import build_rv_game, chsh_game, embed_nonlocal_game
from games.models import QCGame, QCStrategy
from games.sampling import make_rng, random_density, random_enlg_strategy, random_qc_game, random_qc_strategy
from linalg.exceptions import NoConvergence
from seesaw.models import SweepRow

from .exceptions import FileFormatError
from .files import document, dump_document, load_strategy, parse_document, strategy_document, write_document
from .management.commands.sweep import parse_dims
from .reports import SWEEP_HEADER, sweep_csv


FIXTURES = Path(__file__).resolve().parent / "fixtures"


def _constant_qc_game(value, rng, dims=(2, 2, 2)):
    n, s, m = dims
    return QCGame(
        rho=random_density(n * s * m, rng),
        dims=dims,
        win_ops=np.broadcast_to(value * np.eye(s), (2, 2, s, s)),
        name=f"constant-{value}",
    )


class CommandTestCase(SimpleTestCase):
    def setUp(self):
        self._tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self._tmp.cleanup)
        self.tmp = Path(self._tmp.name)

    def write(self, name, obj):
        path = self.tmp / name
        write_document(path, obj if isinstance(obj, dict) else document(obj))
        return str(path)

    def call(self, *args, **options):
        out = StringIO()
        call_command(*args, stdout=out, stderr=StringIO(), **options)
        lines = out.getvalue().splitlines()
        return json.loads(lines[0]), lines[1:]

    def assertExits(self, code, *args, **options):
        out = StringIO()
        with self.assertRaises(CommandError) as caught:
            call_command(*args, stdout=out, stderr=StringIO(), **options)
        self.assertEqual(caught.exception.returncode, code)
        lines = out.getvalue().splitlines()
        summary = json.loads(lines[0])
        self.assertEqual(summary["status"], "error")
        self.assertEqual(summary["exit_code"], code)
        return summary, lines[1:]


# =============================================================================
# FICHIERS
# =============================================================================


class DocumentTests(CommandTestCase):
    def test_game_file_is_canonical(self):
        game = random_qc_game(2, 2, 2, make_rng(1))
        path = self.write("g.json", game)
        text = Path(path).read_text(encoding="utf-8")

        loaded = parse_document(path, ("qc",))
        self.assertEqual(dump_document(document(loaded)), text)
        self.assertTrue(np.array_equal(loaded.rho, game.rho))
        self.assertTrue(np.array_equal(loaded.win_ops, game.win_ops))
        self.assertTrue(text.endswith("}\n"))
        self.assertEqual(text.count("\n"), 1)

    def test_strategy_with_receipt_loads(self):
        rng = make_rng(2)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 2), rng)
        receipt = AdaptationReceipt.from_losses(0.4, 0.1, Fraction(1, 4))
        data = strategy_document(strategy, receipt)
        self.assertEqual(data["receipt"]["scale"], "1/4")

        loaded = load_strategy(self.write("s.json", data))
        self.assertTrue(np.array_equal(loaded.sigma, strategy.sigma))
        self.assertEqual(loaded.dims, (1, 2))

    def test_strategy_metadata_is_kept(self):
        rng = make_rng(19)
        game = random_qc_game(2, 2, 2, rng)
        base = random_qc_strategy(game, (1, 1), rng)
        strategy = QCStrategy(
            base.sigma, base.dims, base.alice_povm, base.bob_povm, name="produit", description="état produit"
        )
        path = self.write("s.json", strategy)
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        self.assertEqual((data["name"], data["description"]), ("produit", "état produit"))
        loaded = load_strategy(path)
        self.assertEqual((loaded.name, loaded.description), ("produit", "état produit"))

        extended = random_enlg_strategy(chsh_game(), (1, 1), rng)
        unnamed = load_strategy(self.write("h.json", extended))
        self.assertEqual((unnamed.name, unnamed.description), ("", ""))
        self.assertIn("name", document(extended))

    def test_structural_errors(self):
        broken = self.tmp / "broken.json"
        broken.write_text("{not json", encoding="utf-8")
        with self.assertRaises(FileFormatError):
            parse_document(broken, ("qc",))
        with self.assertRaises(FileFormatError):
            parse_document(self.tmp / "missing.json", ("qc",))

        data = document(random_qc_game(2, 2, 2, make_rng(3)))
        data["dims"] = [2, 2, 3]
        with self.assertRaises(FileFormatError):
            parse_document(self.write("bad-dims.json", data), ("qc",))

        data = document(random_qc_game(2, 2, 2, make_rng(3)))
        data["rho"] = [[1.0, 0.0]]
        with self.assertRaises(FileFormatError):
            parse_document(self.write("bad-rho.json", data), ("qc",))

        with self.assertRaises(FileFormatError):
            parse_document(self.write("kind.json", data), ("enlg",))

    def test_parse_dims(self):
        self.assertEqual(parse_dims("1,2,3"), [(1, 1), (2, 2), (3, 3)])
        self.assertEqual(parse_dims("1x2, 2X3"), [(1, 2), (2, 3)])
        with self.assertRaises(FileFormatError):
            parse_dims("1,a")
        with self.assertRaises(FileFormatError):
            parse_dims("0")

    def test_sweep_csv_format(self):
        rows = [
            SweepRow((1, 1), 0.75, 2, 7, 0.123456),
            SweepRow((2, 2), 0.8535533905932737, 2, 40, 1.5),
        ]
        self.assertEqual(
            sweep_csv(rows),
            ",".join(SWEEP_HEADER) + "\n"
            "1,0.750000000000,2,7,0.123\n"
            "4,0.853553390593,2,40,1.500\n",
        )
        self.assertTrue(sweep_csv(rows, wall_time=False).endswith("4,0.853553390593,2,40,0.000\n"))


# =============================================================================
# CONSTRUCT / CATALOG / VALIDATE
# =============================================================================


class ConstructCommandTests(CommandTestCase):
    def test_builds_extended_game(self):
        source = self.write("g.json", random_qc_game(2, 2, 2, make_rng(4)))
        output = self.tmp / "h.json"
        summary, lines = self.call("construct", source, output=str(output))

        self.assertEqual(summary["status"], "ok")
        self.assertEqual((summary["n"], summary["m"]), (2, 2))
        self.assertEqual(summary["questions"], [4, 4])
        self.assertEqual(summary["ref_dim"], 4)
        self.assertTrue(lines)
        extended = parse_document(output, ("enlg",))
        self.assertEqual(extended.question_sets, (4, 4))

    def test_non_psd_state_reports_eigenvalue(self):
        rho = np.diag([1.5, -0.5, 0, 0, 0, 0, 0, 0]).astype(complex)
        game = QCGame(rho=rho, dims=(2, 2, 2), win_ops=np.broadcast_to(np.eye(2) / 2, (2, 2, 2, 2)))
        source = self.write("g.json", game)
        summary, lines = self.assertExits(3, "construct", source, output=str(self.tmp / "h.json"))
        codes = [violation["code"] for violation in summary["report"]["violations"]]
        self.assertIn("rho.psd", codes)
        self.assertTrue(any("-0.5" in line for line in lines))
        self.assertFalse((self.tmp / "h.json").exists())

    def test_catalog_file_is_stable(self):
        first, second = self.tmp / "rv1.json", self.tmp / "rv2.json"
        self.call("construct", catalog="rv", output=str(first))
        self.call("construct", catalog="rv", output=str(second))
        expected = dump_document(document(build_rv_game()))
        self.assertEqual(first.read_text(encoding="utf-8"), expected)
        self.assertEqual(second.read_bytes(), first.read_bytes())

    def test_chsh_matches_committed_file(self):
        expected = (FIXTURES / "chsh.json").read_bytes()
        constructed, listed = self.tmp / "c.json", self.tmp / "l.json"
        self.call("construct", catalog="chsh", output=str(constructed))
        self.call("catalog", "chsh", output=str(listed))
        self.assertEqual(constructed.read_bytes(), expected)
        self.assertEqual(listed.read_bytes(), expected)

    def test_argument_errors(self):
        self.assertExits(2, "construct", output=str(self.tmp / "h.json"))
        self.assertExits(2, "construct", catalog="unknown", output=str(self.tmp / "h.json"))
        self.assertExits(2, "construct", str(self.tmp / "missing.json"), output=str(self.tmp / "h.json"))


class CatalogCommandTests(CommandTestCase):
    def test_lists_and_writes(self):
        summary, lines = self.call("catalog")
        self.assertEqual(summary["games"], ["chsh", "rv", "rv-unscaled"])
        self.assertEqual(len(lines), 3)

        output = self.tmp / "chsh.json"
        summary, _ = self.call("catalog", "chsh", output=str(output))
        self.assertEqual(summary["ref_dim"], 1)
        self.assertEqual(output.read_text(encoding="utf-8"), dump_document(document(chsh_game())))


class ValidateCommandTests(CommandTestCase):
    def test_valid_documents(self):
        rng = make_rng(5)
        game = random_qc_game(2, 2, 2, rng)
        game_path = self.write("g.json", game)
        strategy_path = self.write("s.json", random_qc_strategy(game, (2, 1), rng))

        summary, _ = self.call("validate", game_path)
        self.assertTrue(summary["report"]["ok"])
        self.assertIn("xor", summary)
        summary, _ = self.call("validate", strategy_path, game=game_path)
        self.assertTrue(summary["report"]["ok"])

    def test_invalid_documents(self):
        rng = make_rng(6)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 1), rng)
        unnormalized = QCStrategy(
            sigma=2 * strategy.sigma, dims=(1, 1), alice_povm=strategy.alice_povm, bob_povm=strategy.bob_povm
        )
        summary, _ = self.assertExits(3, "validate", self.write("s.json", unnormalized))
        self.assertIn("sigma.trace", [v["code"] for v in summary["report"]["violations"]])

        other = self.write("g3.json", random_qc_game(3, 2, 2, rng))
        summary, _ = self.assertExits(3, "validate", self.write("ok.json", strategy), game=other)
        self.assertIn("dimension", [v["code"] for v in summary["report"]["violations"]])


# =============================================================================
# EVALUATE / ADAPT
# =============================================================================


class EvaluateCommandTests(CommandTestCase):
    def test_always_win(self):
        rng = make_rng(7)
        game = _constant_qc_game(1.0, rng)
        summary, lines = self.call(
            "evaluate",
            self.write("g.json", game),
            self.write("s.json", random_qc_strategy(game, (2, 2), rng)),
        )
        self.assertAlmostEqual(summary["win_probability"], 1.0, places=12)
        self.assertTrue(summary["xor"])
        self.assertIn("1.000000000000", lines[0])
        self.assertIn("0.000000000000", lines[1])

    def test_extended_game(self):
        rng = make_rng(8)
        extended = chsh_game()
        summary, _ = self.call(
            "evaluate",
            self.write("h.json", extended),
            self.write("s.json", random_enlg_strategy(extended, (2, 2), rng)),
        )
        self.assertAlmostEqual(summary["win_probability"] + summary["lose_probability"], 1.0, places=12)
        self.assertNotIn("xor", summary)

    def test_dimension_mismatch(self):
        rng = make_rng(9)
        game = random_qc_game(3, 2, 2, rng)
        strategy = random_qc_strategy(random_qc_game(2, 2, 2, rng), (1, 1), rng)
        summary, _ = self.assertExits(4, "evaluate", self.write("g.json", game), self.write("s.json", strategy))
        self.assertEqual(summary["expected"], [3, 2, 2, 2])
        self.assertEqual(summary["received"], [2, 2, 2, 2])

    def test_numerical_failures_are_validation_errors(self):
        rng = make_rng(18)
        game = random_qc_game(2, 2, 2, rng)
        game_path = self.write("g.json", game)
        strategy_path = self.write("s.json", random_qc_strategy(game, (1, 1), rng))
        with override_settings(NUMERIC_POLICY={"IMAG_TOL": -1.0}):
            summary, _ = self.assertExits(3, "evaluate", game_path, strategy_path)
        self.assertIn("non réelle", summary["error"])

        with mock.patch(
            "cli.management.commands.evaluate.qc_win_prob",
            side_effect=NoConvergence("Jacobi : pas de convergence"),
        ):
            summary, _ = self.assertExits(3, "evaluate", game_path, strategy_path)
        self.assertIn("Jacobi", summary["error"])

    def test_kind_mismatch_is_a_parse_error(self):
        rng = make_rng(10)
        game = random_qc_game(2, 2, 2, rng)
        extended = build_enlg(game)
        strategy = random_enlg_strategy(extended, (1, 1), rng)
        self.assertExits(2, "evaluate", self.write("g.json", game), self.write("s.json", strategy))


class AdaptCommandTests(CommandTestCase):
    def test_forward_on_always_lose_game(self):
        rng = make_rng(11)
        game = _constant_qc_game(0.0, rng)
        output = self.tmp / "adapted.json"
        summary, _ = self.call(
            "adapt",
            "qc-to-enlg",
            self.write("g.json", game),
            self.write("s.json", random_qc_strategy(game, (1, 1), rng)),
            output=str(output),
        )
        receipt = summary["receipt"]
        self.assertEqual(receipt["scale"], "1/4")
        self.assertLess(receipt["residual"], 1e-9)
        self.assertAlmostEqual(receipt["target_loss"], 0.25, places=9)
        self.assertEqual(json.loads(output.read_text(encoding="utf-8"))["receipt"], receipt)

    def test_evaluate_matches_receipt(self):
        rng = make_rng(12)
        game = random_qc_game(2, 2, 2, rng)
        game_path = self.write("g.json", game)
        adapted_path = self.tmp / "adapted.json"
        extended_path = self.tmp / "h.json"
        summary, _ = self.call(
            "adapt",
            "qc-to-enlg",
            game_path,
            self.write("s.json", random_qc_strategy(game, (2, 1), rng)),
            output=str(adapted_path),
        )
        self.call("construct", game_path, output=str(extended_path))
        _, lines = self.call("evaluate", str(extended_path), str(adapted_path))
        self.assertIn(f"{summary['receipt']['target_loss']:.12f}", lines[1])

    def test_backward_then_forward(self):
        rng = make_rng(13)
        game = random_qc_game(2, 2, 2, rng)
        game_path = self.write("g.json", game)
        strategy = random_enlg_strategy(build_enlg(game), (1, 1), rng)
        back, forth = self.tmp / "back.json", self.tmp / "forth.json"

        first, _ = self.call("adapt", "enlg-to-qc", game_path, self.write("s.json", strategy), output=str(back))
        second, _ = self.call("adapt", "qc-to-enlg", game_path, str(back), output=str(forth))
        self.assertEqual(first["receipt"]["scale"], "4")
        self.assertAlmostEqual(second["receipt"]["target_loss"], first["receipt"]["source_loss"], delta=1e-9)

    def test_corrupted_strategy(self):
        game_path = self.write("g.json", random_qc_game(2, 2, 2, make_rng(14)))
        corrupted = self.tmp / "s.json"
        corrupted.write_text('{"kind": "qc-strategy", "dims": [1', encoding="utf-8")
        self.assertExits(2, "adapt", "qc-to-enlg", game_path, str(corrupted), output=str(self.tmp / "o.json"))

    def test_residual_above_tolerance(self):
        rng = make_rng(15)
        game = random_qc_game(2, 2, 2, rng)
        strategy = random_qc_strategy(game, (1, 1), rng)
        receipt = AdaptationReceipt.from_losses(0.4, 0.5, Fraction(1, 4))

        def broken_adapter(game, source):
            return source, receipt

        output = self.tmp / "o.json"
        with mock.patch.dict(
            "cli.management.commands.adapt.DIRECTIONS", {"qc-to-enlg": ("qc-strategy", broken_adapter)}
        ):
            summary, _ = self.assertExits(
                5, "adapt", "qc-to-enlg", self.write("g.json", game), self.write("s.json", strategy), output=str(output)
            )
        self.assertAlmostEqual(summary["receipt"]["residual"], 0.4, places=12)
        self.assertTrue(output.exists())


# =============================================================================
# SWEEP
# =============================================================================


class SweepCommandTests(CommandTestCase):
    def test_always_win_single_row(self):
        game = embed_nonlocal_game(np.full((2, 2), 0.25), lambda a, b, x, y: True, name="always")
        output = self.tmp / "sweep.csv"
        summary, _ = self.call(
            "sweep", self.write("h.json", game), dims="1", restarts=2, output=str(output), no_wall_time=True
        )
        self.assertEqual(len(summary["rows"]), 1)
        self.assertEqual(
            output.read_text(encoding="utf-8").splitlines()[1].split(",")[:2], ["1", "1.000000000000"]
        )

    def test_same_seed_same_report(self):
        options = dict(catalog="chsh", dims="1,1x2,2", restarts=2, max_rounds=30, seed=3, no_wall_time=True)
        first, second = self.tmp / "a.csv", self.tmp / "b.csv"
        summary, _ = self.call("sweep", output=str(first), **options)
        self.call("sweep", output=str(second), workers=2, **options)

        self.assertEqual(first.read_bytes(), second.read_bytes())
        self.assertTrue(summary["non_decreasing"])
        self.assertEqual(summary["seed"], 3)
        lines = first.read_text(encoding="utf-8").splitlines()
        self.assertEqual(lines[0], "N,lower_bound,restarts_used,rounds,wall_time_seconds")
        self.assertEqual([line.split(",")[0] for line in lines[1:]], ["1", "2", "4"])

    def test_report_follows_summary_without_output(self):
        _, lines = self.call("sweep", catalog="chsh", dims="1", restarts=1, max_rounds=5, no_wall_time=True)
        self.assertEqual(lines[0], ",".join(SWEEP_HEADER))

    def test_qc_game(self):
        rng = make_rng(16)
        summary, _ = self.call(
            "sweep", self.write("g.json", random_qc_game(2, 2, 2, rng)), dims="1,2", restarts=2, max_rounds=50
        )
        bounds = [row["lower_bound"] for row in summary["rows"]]
        self.assertGreaterEqual(bounds[1], bounds[0] - 1e-12)

    def test_errors(self):
        large = self.write("g.json", random_qc_game(2, 2, 2, make_rng(17), answers=(3, 2)))
        self.assertExits(6, "sweep", large, dims="1", restarts=1)
        self.assertExits(2, "sweep", catalog="chsh", dims="2y2")
        self.assertExits(2, "sweep", catalog="chsh", dims="1", restarts=0)

    @tag("slow")
    def test_rv_report_is_reproducible(self):
        options = dict(catalog="rv", dims="1,2,3", restarts=20, seed=0, no_wall_time=True)
        first, second = self.tmp / "a.csv", self.tmp / "b.csv"
        summary, _ = self.call("sweep", output=str(first), **options)
        self.call("sweep", output=str(second), **options)

        self.assertEqual(first.read_bytes(), second.read_bytes())
        bounds = [row["lower_bound"] for row in summary["rows"]]
        self.assertTrue(all(b > a for a, b in zip(bounds, bounds[1:])))
        self.assertTrue(all(b < 1 - 1e-4 for b in bounds))
        self.assertGreaterEqual(bounds[2] - bounds[0], 1e-3)
