import os
import random
import tempfile
import threading
import unittest
from unittest import mock

from streamforge.datas.config import SearchConfig, default_config, load_search_config
from streamforge.errors import ConfigError
from streamforge.utils.logger import Logger, NullLogger, ensure_logger
from streamforge.utils.util import NameSupply, derive_seed, list_lengths_for, natural_key, random_list


class TestNameSupply(unittest.TestCase):
    def test_sequence(self):
        supply = NameSupply("_v")
        self.assertEqual([supply.fresh() for _ in range(3)], ["_v1", "_v2", "_v3"])

    def test_threads_never_share_a_name(self):
        supply = NameSupply("h")
        names = []
        lock = threading.Lock()

        def work():
            for _ in range(100):
                name = supply.fresh()
                with lock:
                    names.append(name)

        threads = [threading.Thread(target=work) for _ in range(4)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        self.assertEqual(len(set(names)), 400)

    def test_empty_prefix(self):
        with self.assertRaises(ValueError):
            NameSupply("")


class TestHelpers(unittest.TestCase):
    def test_natural_key(self):
        self.assertEqual(sorted(["v10", "v2", "v1"], key=natural_key), ["v1", "v2", "v10"])

    def test_derive_seed_is_stable(self):
        self.assertEqual(derive_seed(7, "hole", 2), derive_seed(7, "hole", 2))
        self.assertNotEqual(derive_seed(7, "hole", 2), derive_seed(7, "hole", 3))
        self.assertLess(derive_seed(0, "x"), 2 ** 64)

    def test_lengths_start_short(self):
        lengths = list_lengths_for(10, 0, 12, random.Random(0))
        self.assertEqual(lengths[:2], [0, 1])
        self.assertEqual(len(lengths), 10)
        self.assertGreaterEqual(min(list_lengths_for(3, 2, 4, random.Random(0))), 2)

    def test_random_list_values_on_grid(self):
        xs = random_list(random.Random(3), 5, 5)
        self.assertEqual(len(xs), 5)
        self.assertTrue(all((2 * v).denominator == 1 and -5 <= v <= 5 for v in xs))


class TestConfig(unittest.TestCase):
    def test_defaults(self):
        cfg = default_config()
        self.assertEqual(cfg.max_size, 25)
        self.assertEqual(cfg.test_count, 200)
        self.assertEqual(cfg.list_length_range, (0, 12))
        self.assertTrue(cfg.use_decomposition)

    def test_validation(self):
        with self.assertRaises(ConfigError):
            SearchConfig(max_size=0)
        with self.assertRaises(ConfigError):
            SearchConfig(list_length_range=(5, 2))
        with self.assertRaises(ConfigError):
            SearchConfig(seed=2 ** 64)

    def test_replace_validates(self):
        cfg = default_config().replace(seed=9)
        self.assertEqual(cfg.seed, 9)
        with self.assertRaises(ConfigError):
            cfg.replace(workers=0)

    @mock.patch.dict(os.environ, {"STREAMFORGE_TIMEOUT": "12.5", "STREAMFORGE_SEED": "4",
                                  "STREAMFORGE_NO_SYMBOLIC": "1"})
    def test_environment(self):
        cfg = load_search_config()
        self.assertEqual(cfg.timeout_seconds, 12.5)
        self.assertEqual(cfg.seed, 4)
        self.assertFalse(cfg.use_symbolic)

    @mock.patch.dict(os.environ, {"STREAMFORGE_SEED": "4"})
    def test_overrides_win(self):
        self.assertEqual(load_search_config(seed=11).seed, 11)
        self.assertEqual(load_search_config(seed=None).seed, 4)

    @mock.patch.dict(os.environ, {"STREAMFORGE_MAX_SIZE": "big"})
    def test_bad_environment_value(self):
        with self.assertRaises(ConfigError):
            load_search_config()

    def test_unknown_key(self):
        with self.assertRaises(ConfigError):
            load_search_config(colour="blue")


class TestLogger(unittest.TestCase):
    def test_threshold(self):
        logger = Logger(threshold="error", env="production", log_file=os.devnull)
        self.assertTrue(logger.enabled("ERROR"))
        self.assertFalse(logger.enabled("INFO"))

    def test_bad_threshold(self):
        with self.assertRaises(ConfigError):
            Logger(threshold="loud")

    def test_file_output_outside_development(self):
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, "run.log")
            logger = Logger(threshold="debug", env="production", log_file=path)
            logger.log("[Synthesizer] hello", level="DEBUG")
            logger.log("dropped?", level="INFO")
            with open(path, encoding="utf-8") as fh:
                lines = fh.read().splitlines()
        self.assertEqual(len(lines), 2)
        self.assertIn("[DEBUG] [Synthesizer] hello", lines[0])

    def test_stderr_in_development(self):
        logger = Logger(threshold="info", env="development")
        with mock.patch("sys.stderr") as err:
            logger.log("visible")
            logger.log("hidden", level="DEBUG")
        written = "".join(call.args[0] for call in err.write.call_args_list)
        self.assertIn("[INFO] visible", written)
        self.assertNotIn("hidden", written)

    def test_null_logger(self):
        self.assertIsInstance(ensure_logger(None), NullLogger)
        NullLogger().log("nothing")


if __name__ == "__main__":
    unittest.main()
