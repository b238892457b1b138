import os

import pytest

from plotkit.csvdata import (PlotDataError, read_distribution, read_heat, read_matrix,
                             read_modes, read_schedule, read_shuttle)


class TestSchemaEnforcement:
    def test_missing_file(self, tmp_path):
        with pytest.raises(PlotDataError, match="does not exist"):
            read_modes(str(tmp_path / "nope.csv"))

    def test_empty_file(self, tmp_path):
        p = tmp_path / "modes.csv"
        p.write_text("")
        with pytest.raises(PlotDataError, match="empty"):
            read_modes(str(p))

    def test_header_only(self, tmp_path):
        p = tmp_path / "heat_optical.csv"
        p.write_text("time,element,occupation\n")
        with pytest.raises(PlotDataError, match="no data rows"):
            read_heat(str(p))

    def test_wrong_header(self, tmp_path):
        p = tmp_path / "walk_none.csv"
        p.write_text("elem,pop\n1,0.5\n")
        with pytest.raises(PlotDataError, match="header"):
            read_distribution(str(p))

    def test_non_numeric_cell(self, tmp_path):
        p = tmp_path / "walk_none.csv"
        p.write_text("element,population\n1,abc\n")
        with pytest.raises(PlotDataError, match="non-numeric"):
            read_distribution(str(p))

    def test_sparse_matrix_rejected(self, tmp_path):
        p = tmp_path / "coupling_matrix_l01.csv"
        p.write_text("j,jprime,value\n1,1,0.5\n2,2,0.5\n")
        with pytest.raises(PlotDataError, match="dense"):
            read_matrix(str(p))


class TestGoldenParsing:
    def test_modes(self, golden_dir):
        data = read_modes(os.path.join(golden_dir, "modes.csv"))
        assert set(data.profiles) == {1, 2, 3, 4, 5}
        assert all(v.size == 6 for v in data.profiles.values())

    def test_matrix(self, golden_dir):
        M = read_matrix(os.path.join(golden_dir, "coupling_matrix_l01.csv"))
        assert M.shape == (6, 6)
        assert abs(M.trace() - 1.0) < 1e-12

    def test_distribution(self, golden_dir):
        pops = read_distribution(os.path.join(golden_dir, "walk_none.csv"))
        assert pops.shape == (20,)
        assert abs(pops.sum() - 1.0) < 1e-6

    def test_heat(self, golden_dir):
        s = read_heat(os.path.join(golden_dir, "heat_optical.csv"))
        assert s.times.shape == (24,)
        assert s.occupations.shape == (24, 6)

    def test_shuttle(self, golden_dir):
        traj = read_shuttle(os.path.join(golden_dir, "shuttle_unitary.csv"))
        assert traj.optical.shape[1] == 3
        assert traj.mechanical.shape[1] == 4
        sched = read_schedule(os.path.join(golden_dir, "shuttle_schedule.csv"))
        assert sched.spans.shape == (2, 2)
        assert sched.g_abs.shape == (2, 3)
