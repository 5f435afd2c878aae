"""Tests for run-time settings."""

import os
import shutil
import tempfile
import unittest
from unittest import mock

import pytest
from pydantic import ValidationError

import helpers  # noqa: F401

from acgb.config import Settings


def clean_env(**values):
    env = {k: v for k, v in os.environ.items() if not k.startswith("ACGB_")}
    env.update(values)
    return mock.patch.dict(os.environ, env, clear=True)


class TestSettings(unittest.TestCase):
    """Test defaults, environment variables and overrides."""

    def setUp(self):
        self.tmpdir = tempfile.mkdtemp()
        self.missing_env = os.path.join(self.tmpdir, "missing.env")

    def tearDown(self):
        shutil.rmtree(self.tmpdir, ignore_errors=True)

    def test_defaults(self):
        """Test the built-in defaults."""
        with clean_env():
            settings = Settings.from_env(self.missing_env)
        self.assertEqual(settings, Settings())
        self.assertEqual(settings.max_degree, 6)
        self.assertEqual(settings.log_level, "WARNING")
        self.assertTrue(settings.verify)
        self.assertFalse(settings.random_basis_change)
        self.assertEqual(settings.workers, 1)

    def test_environment(self):
        """Test ACGB_* variables."""
        with clean_env(ACGB_MAX_DEGREE="9", ACGB_VERIFY="false", ACGB_LOG_LEVEL="debug", ACGB_SEED=""):
            settings = Settings.from_env(self.missing_env)
        self.assertEqual(settings.max_degree, 9)
        self.assertFalse(settings.verify)
        self.assertEqual(settings.log_level, "DEBUG")
        self.assertEqual(settings.seed, 0)

    def test_dotenv_file(self):
        """Test that a .env file fills in missing variables without overriding set ones."""
        path = os.path.join(self.tmpdir, ".env")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write("ACGB_WORKERS=3\nACGB_TERM_CAP=50\n")
        with clean_env(ACGB_TERM_CAP="70"):
            settings = Settings.from_env(path)
        self.assertEqual(settings.workers, 3)
        self.assertEqual(settings.term_cap, 70)

    def test_merged(self):
        """Test that None overrides are ignored and the rest revalidated."""
        base = Settings(seed=4)
        self.assertIs(base.merged(seed=None), base)
        merged = base.merged(seed=None, workers=2, verify=False)
        self.assertEqual((merged.seed, merged.workers, merged.verify), (4, 2, False))
        with self.assertRaises(ValidationError):
            base.merged(workers=0)

    def test_validation(self):
        """Test rejected values."""
        with self.assertRaises(ValidationError):
            Settings(log_level="LOUD")
        with self.assertRaises(ValidationError):
            Settings(term_cap=0)
        with self.assertRaises(ValidationError):
            Settings().merged(u_set_degree_cap=-1)
        with clean_env(ACGB_MAX_DEGREE="many"):
            with self.assertRaises(ValidationError):
                Settings.from_env(self.missing_env)

    def test_frozen(self):
        """Test that settings are immutable."""
        with self.assertRaises(ValidationError):
            Settings().seed = 3


if __name__ == "__main__":
    pytest.main([__file__])
