from pathlib import Path

import pytest

from figs import SchemaError, plot_mse_sweep, plot_pattern, read_table
from figs.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
PATTERN = FIXTURES / "pattern_golden.csv"
MEDIANS = FIXTURES / "summary_median_golden.csv"


class TestReadTable:
    def test_skips_metadata_and_parses_numbers(self):
        table = read_table(PATTERN)
        assert set(table) == {"angle_deg", "objective_dBi", "dtb_dBi", "dtb_hbf_dBi"}
        assert len(table["angle_deg"]) == 60
        assert isinstance(table["angle_deg"][0], float)

    def test_missing_column_named(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("angle_deg,objective_dBi\n0,1\n")
        with pytest.raises(SchemaError, match="dtb_dBi"):
            read_table(bad, required=("angle_deg", "objective_dBi", "dtb_dBi"))

    def test_empty_table_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("# seed=1\n")
        with pytest.raises(SchemaError, match="empty"):
            read_table(empty)

    def test_header_only_rejected(self, tmp_path):
        sparse = tmp_path / "header.csv"
        sparse.write_text("a,b\n")
        with pytest.raises(SchemaError, match="no data rows"):
            read_table(sparse)

    def test_ragged_row_rejected(self, tmp_path):
        ragged = tmp_path / "ragged.csv"
        ragged.write_text("a,b\n1,2\n3\n")
        with pytest.raises(SchemaError, match="row width"):
            read_table(ragged)


class TestPlotPattern:
    def test_renders_golden_fixture(self, tmp_path):
        out = plot_pattern(PATTERN, tmp_path / "pattern.png")
        assert out.exists() and out.stat().st_size > 1000

    def test_idempotent_and_input_untouched(self, tmp_path):
        before = PATTERN.read_bytes()
        plot_pattern(PATTERN, tmp_path / "a.png")
        plot_pattern(PATTERN, tmp_path / "a.png")
        assert PATTERN.read_bytes() == before
        assert (tmp_path / "a.png").exists()

    def test_all_zero_pattern_clipped_at_floor(self, tmp_path):
        flat = tmp_path / "flat.csv"
        rows = "\n".join(f"{a},-120,-120,-120" for a in range(-90, 91, 10))
        flat.write_text("angle_deg,objective_dBi,dtb_dBi,dtb_hbf_dBi\n" + rows + "\n")
        out = plot_pattern(flat, tmp_path / "flat.png")
        assert out.exists()

    def test_missing_column_no_file_written(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("angle_deg,objective_dBi\n0,1\n")
        target = tmp_path / "bad.png"
        with pytest.raises(SchemaError, match="dtb_dBi"):
            plot_pattern(bad, target)
        assert not target.exists()


class TestPlotMseSweep:
    def test_renders_golden_fixture(self, tmp_path):
        out = plot_mse_sweep(MEDIANS, tmp_path / "mse.png")
        assert out.exists() and out.stat().st_size > 1000

    def test_single_point_markers_only(self, tmp_path):
        single = tmp_path / "single.csv"
        single.write_text("gamma_db,n_bs,n_runs,median_mse_no_hbf,median_mse_hbf\n"
                          "10,32,4,50.0,49.5\n")
        out = plot_mse_sweep(single, tmp_path / "single.png", logy=True)
        assert out.exists()

    def test_multiple_sizes_render(self, tmp_path):
        multi = tmp_path / "multi.csv"
        multi.write_text("gamma_db,n_bs,n_runs,median_mse_no_hbf,median_mse_hbf\n"
                         "10,32,4,50.0,49.5\n20,32,4,55.0,54.0\n"
                         "10,64,4,60.0,59.5\n20,64,4,66.0,65.0\n")
        out = plot_mse_sweep(multi, tmp_path / "multi.png")
        assert out.exists()

    def test_missing_column_no_file_written(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("gamma_db,n_bs\n10,32\n")
        target = tmp_path / "bad.png"
        with pytest.raises(SchemaError, match="median_mse_no_hbf"):
            plot_mse_sweep(bad, target)
        assert not target.exists()


class TestCli:
    def test_pattern_command(self, tmp_path):
        out = tmp_path / "p.png"
        assert main(["pattern", str(PATTERN), "-o", str(out)]) == 0
        assert out.exists()

    def test_mse_command(self, tmp_path):
        out = tmp_path / "m.png"
        assert main(["mse", str(MEDIANS), "-o", str(out), "--logy"]) == 0
        assert out.exists()

    def test_schema_violation_exit_code(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("angle_deg\n0\n")
        out = tmp_path / "x.png"
        assert main(["pattern", str(bad), "-o", str(out)]) == 2
        assert not out.exists()

    def test_missing_file_exit_code(self, tmp_path):
        assert main(["pattern", str(tmp_path / "none.csv"),
                     "-o", str(tmp_path / "x.png")]) == 2
