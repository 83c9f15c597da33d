"""Unit tests for run output persistence and formatting helpers."""

import json

import numpy as np
import pandas as pd
import pytest


class TestWriteRunOutputs:
    """Tests for write_run_outputs and generate_output_stem."""

    def test_writes_csv_and_sidecar(self, tmp_path):
        """Should write a CSV with its JSON sidecar into a new directory."""
        from wgslab.utils.storage import write_run_outputs

        frame = pd.DataFrame({"alpha": [0.5, 1.0], "gbar_2pi": [0.01, -0.02]})
        outdir = tmp_path / "nested" / "out"

        success, csv_path, error = write_run_outputs(frame, outdir, "detect", {"summary": "alpha*=1"})

        assert success is True
        assert error == ""
        assert csv_path.endswith(".csv")
        assert "detect-" in csv_path

        sidecar = json.loads(open(csv_path[:-4] + ".json", encoding="utf-8").read())
        assert sidecar == {"summary": "alpha*=1"}

    def test_csv_format(self, tmp_path):
        """Should write a header row, no index and newline line endings."""
        from wgslab.utils.storage import write_run_outputs

        frame = pd.DataFrame({"t": [0.0, 0.5], "ggm": [0.0, 0.25]})

        _, csv_path, _ = write_run_outputs(frame, tmp_path, "ggm-curve", {})
        content = open(csv_path, "rb").read().decode("utf-8")

        assert content == "t,ggm\n0.0,0.0\n0.5,0.25\n"

    def test_sidecar_serializes_numpy(self, tmp_path):
        """Should fall back to str() for values JSON cannot encode."""
        from wgslab.utils.storage import write_run_outputs

        success, csv_path, _ = write_run_outputs(pd.DataFrame({"a": [1]}), tmp_path, "avg",
                                                 {"grid": np.arange(2)})

        assert success is True
        sidecar = json.loads(open(csv_path[:-4] + ".json", encoding="utf-8").read())
        assert sidecar["grid"] == "[0 1]"

    def test_write_failure(self, tmp_path):
        """Should return (False, '', message) when the directory cannot be created."""
        from wgslab.utils.storage import write_run_outputs

        blocker = tmp_path / "file"
        blocker.write_text("x")

        success, csv_path, error = write_run_outputs(pd.DataFrame({"a": [1]}), blocker, "avg", {})

        assert success is False
        assert csv_path == ""
        assert error.startswith("Write error")

    def test_stem_collision_gets_suffix(self, tmp_path, mocker):
        """Should append a short UUID when the timestamped name is taken."""
        from wgslab.utils.storage import generate_output_stem

        mock_datetime = mocker.patch("wgslab.utils.storage.datetime")
        mock_datetime.now.return_value.strftime.return_value = "20260101T000000"

        first = generate_output_stem(tmp_path, "nsat")
        first.with_suffix(".csv").write_text("")
        second = generate_output_stem(tmp_path, "nsat")

        assert first.name == "nsat-20260101T000000"
        assert second.name.startswith("nsat-20260101T000000-")
        assert len(second.name) == len("nsat-20260101T000000-") + 8


class TestStateDump:
    """Tests for dump_state and load_state."""

    def test_round_trip(self, tmp_path, chain_model):
        """Should restore the amplitudes bit for bit."""
        from wgslab.exact import build_wgs
        from wgslab.utils.storage import dump_state, load_state

        state = build_wgs(chain_model, 1.3)
        path = tmp_path / "state.bin"

        assert dump_state(state, path) == (True, "")
        np.testing.assert_array_equal(load_state(path).amplitudes, state.amplitudes)

    def test_layout(self, tmp_path):
        """Should write a 16-byte header followed by 16 bytes per amplitude."""
        from wgslab.exact import StateVector
        from wgslab.utils.storage import dump_state

        path = tmp_path / "state.bin"
        dump_state(StateVector(np.array([1, 0, 0, 0], dtype=complex)), path)
        data = path.read_bytes()

        assert len(data) == 16 + 4 * 16
        assert data[:4] == b"WGSV"

    def test_bad_magic(self, tmp_path):
        """Should reject files without the state magic."""
        from wgslab.utils.parsers import ParseError
        from wgslab.utils.storage import load_state

        path = tmp_path / "state.bin"
        path.write_bytes(b"XXXX" + bytes(12) + bytes(64))

        with pytest.raises(ParseError, match="not a state dump"):
            load_state(path)

    def test_truncated(self, tmp_path, chain_model):
        """Should reject a payload shorter than 2^N amplitudes."""
        from wgslab.exact import build_wgs
        from wgslab.utils.parsers import ParseError
        from wgslab.utils.storage import dump_state, load_state

        path = tmp_path / "state.bin"
        dump_state(build_wgs(chain_model, 1.0), path)
        path.write_bytes(path.read_bytes()[:-16])

        with pytest.raises(ParseError, match="payload"):
            load_state(path)

    def test_dump_failure(self, tmp_path, chain_model):
        """Should report a failure instead of raising."""
        from wgslab.exact import build_wgs
        from wgslab.utils.storage import dump_state

        success, error = dump_state(build_wgs(chain_model, 1.0), tmp_path / "missing" / "state.bin")

        assert success is False
        assert error.startswith("Dump error")


class TestFormatting:
    """Tests for formatting helpers."""

    @pytest.mark.parametrize("value,expected", [(0.0, "0"), (0.5, "0.5"), (1e-4, "0.0001"), (2.0, "2")])
    def test_format_float(self, value, expected):
        """Should print the shortest text without a trailing '.0'."""
        from wgslab.utils.formatting import format_float

        assert format_float(value) == expected

    def test_column_label(self):
        """Should build self-describing column names."""
        from wgslab.utils.formatting import column_label

        assert column_label("ggm_alpha", 0.5) == "ggm_alpha0.5"
        assert column_label("ggm_alpha", 2.0) == "ggm_alpha2"

    def test_format_metric(self):
        """Should handle missing values, integers and floats."""
        from wgslab.utils.formatting import format_metric

        assert format_metric(None) == "N/A"
        assert format_metric(float("nan"), na_text="-") == "-"
        assert format_metric(41) == "41"
        assert format_metric(0.123456789) == "0.123457"

    @pytest.mark.parametrize("seconds,expected", [(0.5, "500 ms"), (12.34, "12.3 s"), (245, "4 min 05 s")])
    def test_format_duration(self, seconds, expected):
        """Should pick units by magnitude."""
        from wgslab.utils.formatting import format_duration

        assert format_duration(seconds) == expected


class TestWorkers:
    """Tests for get_worker_count and parallel_map."""

    def test_flag_wins(self, monkeypatch):
        """Should prefer the explicit flag over the environment."""
        from wgslab.config import get_worker_count

        monkeypatch.setenv("WGSLAB_WORKERS", "3")

        assert get_worker_count(2) == 2

    def test_environment(self, monkeypatch):
        """Should read WGSLAB_WORKERS when no flag is given."""
        from wgslab.config import get_worker_count

        monkeypatch.setenv("WGSLAB_WORKERS", "3")

        assert get_worker_count() == 3

    def test_cpu_default(self, monkeypatch, mocker):
        """Should fall back to the CPU count."""
        from wgslab.config import get_worker_count

        monkeypatch.delenv("WGSLAB_WORKERS", raising=False)
        mocker.patch("wgslab.config.os.cpu_count", return_value=6)

        assert get_worker_count() == 6

    @pytest.mark.parametrize("raw", ["zero", "0"])
    def test_invalid(self, monkeypatch, raw):
        """Should reject non-integer and non-positive counts."""
        from wgslab.config import get_worker_count

        monkeypatch.setenv("WGSLAB_WORKERS", raw)

        with pytest.raises(ValueError):
            get_worker_count()

    def test_inline_and_pool_agree(self):
        """Should return results in input order with or without a pool."""
        from wgslab.utils.workers import parallel_map

        items = [-3, 1, -2, 5]

        assert parallel_map(abs, items, workers=1) == [3, 1, 2, 5]
        assert parallel_map(abs, items, workers=2) == [3, 1, 2, 5]
