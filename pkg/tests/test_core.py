"""
Tests for core modules
"""

import json

import numpy as np
import pytest
import yaml

from src.core.config import Config, get_config, set_config
from src.core.constants import COLORS, DEFAULT_MAX_ITERS, EXIT_BUDGET, EXIT_INVALID_CONFIG, VERSION
from src.core.errors import (
    BudgetExceededError,
    DripError,
    IndeterminateError,
    InvalidInputError,
    OutOfDomainError,
)
from src.core.log import setup_logger
from src.core.matrix_io import (
    dumps_json,
    format_matrix_csv,
    parse_matrix_csv,
    parse_vector_csv,
    read_json,
    read_matrix,
    write_json,
    write_matrix,
    write_text,
)


class TestColors:
    """Tests for COLORS class"""

    def test_colorize(self):
        """Colorize text"""
        result = COLORS.colorize("test", COLORS.RED)
        assert "test" in result
        assert COLORS.RED in result
        assert COLORS.END in result

    def test_success(self):
        """Success tag"""
        result = COLORS.success("test")
        assert "[OK] test" in result
        assert COLORS.GREEN in result

    def test_error(self):
        """Error tag"""
        result = COLORS.error("test")
        assert "[ERROR] test" in result
        assert COLORS.RED in result

    def test_warning(self):
        """Warning tag"""
        assert "[WARN]" in COLORS.warning("test")

    def test_info(self):
        """Info tag"""
        assert "[INFO]" in COLORS.info("test")


class TestConstants:
    """Tests for constants"""

    def test_version_format(self):
        """Version in correct format"""
        parts = VERSION.split(".")
        assert len(parts) == 3
        assert all(p.isdigit() for p in parts)

    def test_exit_codes(self):
        """Exit codes for invalid input and budget refusal"""
        assert EXIT_INVALID_CONFIG == 2
        assert EXIT_BUDGET == 3


class TestErrors:
    """Tests for the exception hierarchy"""

    def test_invalid_input_is_value_error(self):
        """InvalidInputError doubles as ValueError"""
        assert issubclass(InvalidInputError, ValueError)
        assert issubclass(InvalidInputError, DripError)

    def test_out_of_domain_is_invalid_input(self):
        """OutOfDomainError is a kind of invalid input"""
        assert issubclass(OutOfDomainError, InvalidInputError)

    def test_budget_carries_numbers(self):
        """BudgetExceededError keeps required and budget"""
        err = BudgetExceededError("too many", required=10, budget=5)
        assert err.required == 10
        assert err.budget == 5
        assert str(err) == "too many"

    def test_indeterminate_is_not_invalid_input(self):
        """A lower-bound certificate is not bad input"""
        assert not issubclass(IndeterminateError, InvalidInputError)


class TestConfig:
    """Tests for configuration"""

    def test_defaults(self):
        """Defaults match constants"""
        cfg = Config()
        assert cfg.max_iters == DEFAULT_MAX_ITERS
        assert cfg.decompose_strategy == "peel"
        assert cfg.seed == 1

    def test_missing_file_gives_defaults(self, temp_dir):
        """Missing file falls back to defaults"""
        cfg = Config.load(temp_dir / "absent.yaml")
        assert cfg == Config()

    def test_malformed_file_gives_defaults(self, temp_dir):
        """Malformed YAML is ignored with a warning"""
        path = temp_dir / "bad.yaml"
        path.write_text("solver: [unclosed\n")
        assert Config.load(path) == Config()

    def test_nested_layout(self, temp_dir):
        """Values are read from their sections"""
        path = temp_dir / "drip.yaml"
        path.write_text(yaml.safe_dump({
            "solver": {"tol": 1e-6, "max_iters": 10},
            "experiment": {"trials": 3, "frame_kind": "random_tight"},
        }))
        cfg = Config.load(path)
        assert cfg.solver_tol == 1e-6
        assert cfg.max_iters == 10
        assert cfg.trials == 3
        assert cfg.frame_kind == "random_tight"
        assert cfg.rank_tol == Config().rank_tol

    def test_save_then_load(self, temp_dir):
        """Saved config loads back equal"""
        path = temp_dir / "drip.yaml"
        cfg = Config(trials=7, eps=0.05, decompose_strategy="pairwise")
        cfg.save(path)
        assert Config.load(path) == cfg

    def test_set_and_get(self):
        """Global config can be replaced"""
        set_config(Config(trials=3))
        assert get_config().trials == 3


class TestLogger:
    """Tests for logger setup"""

    def test_levels(self):
        """Verbose is DEBUG, quiet is WARNING"""
        import logging
        setup_logger(verbose=True)
        assert logging.getLogger().level == logging.DEBUG
        setup_logger(quiet=True)
        assert logging.getLogger().level == logging.WARNING
        setup_logger()
        assert logging.getLogger().level == logging.INFO


class TestMatrixCsv:
    """Tests for the matrix CSV format"""

    def test_header_and_values(self):
        """Header is rows,cols"""
        text = format_matrix_csv(np.array([[1.0, 2.0], [3.0, 0.5]]))
        assert text.splitlines() == ["2,2", "1,2", "3,0.5"]

    def test_full_precision(self):
        """Values survive with 17 significant digits"""
        m = np.array([[0.1, 1.0 / 3.0], [np.pi, -1e-300]])
        assert np.array_equal(parse_matrix_csv(format_matrix_csv(m)), m)

    def test_vector_is_column(self):
        """1-D input is stored as n x 1"""
        text = format_matrix_csv(np.array([1.0, 2.0, 3.0]))
        assert text.splitlines()[0] == "3,1"
        assert parse_vector_csv(text).tolist() == [1.0, 2.0, 3.0]

    def test_empty_matrix(self):
        """Zero rows parse to an empty array"""
        assert parse_matrix_csv("0,4\n").shape == (0, 4)

    def test_bad_header(self):
        """Header must be two integers"""
        with pytest.raises(InvalidInputError, match="bad header"):
            parse_matrix_csv("2;2\n1,2\n3,4\n", "m.csv")

    def test_wrong_record_count(self):
        """Record count must match the header"""
        with pytest.raises(InvalidInputError, match="expected 3 records"):
            parse_matrix_csv("3,1\n1\n2\n")

    def test_wrong_field_count_names_line(self):
        """Field count errors carry file and line"""
        with pytest.raises(InvalidInputError, match=r"m\.csv:3"):
            parse_matrix_csv("2,2\n1,2\n3\n", "m.csv")

    def test_non_numeric(self):
        """Non-numeric fields are rejected"""
        with pytest.raises(InvalidInputError):
            parse_matrix_csv("1,2\n1,abc\n")

    def test_non_finite(self):
        """NaN is rejected on read and write"""
        with pytest.raises(InvalidInputError, match="non-finite"):
            parse_matrix_csv("1,2\n1,nan\n")
        with pytest.raises(InvalidInputError):
            format_matrix_csv(np.array([np.inf]))

    def test_vector_rejects_matrix(self):
        """A 2x2 matrix is not a vector"""
        with pytest.raises(InvalidInputError, match="expected a vector"):
            parse_vector_csv("2,2\n1,2\n3,4\n")


class TestFiles:
    """Tests for file helpers"""

    def test_write_text_adds_newline(self, temp_dir):
        """Trailing newline is added"""
        path = temp_dir / "a" / "b" / "x.txt"
        write_text(path, "content")
        assert path.read_text() == "content\n"

    def test_write_read_matrix(self, temp_dir):
        """Matrix files are read back exactly"""
        path = temp_dir / "m.csv"
        m = np.arange(6.0).reshape(2, 3) / 7.0
        write_matrix(path, m)
        assert np.array_equal(read_matrix(path), m)

    def test_missing_matrix(self, temp_dir):
        """Missing file is invalid input"""
        with pytest.raises(InvalidInputError, match="not found"):
            read_matrix(temp_dir / "none.csv")

    def test_json(self, temp_dir):
        """JSON documents are written and read"""
        path = temp_dir / "r.json"
        write_json(path, {"b": 1, "a": [1.5, 2]})
        assert read_json(path) == {"b": 1, "a": [1.5, 2]}

    def test_bad_json(self, temp_dir):
        """Broken JSON is invalid input"""
        path = temp_dir / "r.json"
        path.write_text("{")
        with pytest.raises(InvalidInputError):
            read_json(path)

    def test_dumps_json_is_deterministic(self):
        """Insertion order kept, NaN refused"""
        assert dumps_json({"z": 1, "a": 0.1}) == '{"z": 1, "a": 0.1}'
        assert json.loads(dumps_json([1, 2])) == [1, 2]
        with pytest.raises(ValueError):
            dumps_json({"x": float("nan")})
