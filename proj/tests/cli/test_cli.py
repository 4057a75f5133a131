# Copyright 2026 The fqcontrol Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.


"""End-to-end checks of the fqc command-line tool.

Usage: test_cli.py /path/to/fqc
"""

import csv
import io
import json
import math
import os
import subprocess
import sys
import tempfile
import unittest

FQC = None

QUBIT_HEADER = ("theta_bar,phi_bar,cos2theta,cos2phi,Q,n_targets,frac_reachable,mean_err,"
                "neglog2_mean_err,std_neglog2_err,max_err,seed")
GAUSS_HEADER = "q,Q,n_targets,frac_reachable,mean_err,neglog2_mean_err,std_neglog2_err,max_err,seed"


def run(*args, env=None):
    e = dict(os.environ)
    e["FQC_LOG"] = "silent"
    if env:
        e.update(env)
    return subprocess.run([FQC, *args], capture_output=True, text=True, env=e)


def read_text(path):
    with open(path) as f:
        return f.read()


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def data_lines(text):
    return [l for l in text.splitlines() if l and not l.startswith("#")]


class Capacity(unittest.TestCase):
    def test_values(self):
        self.assertEqual(run("capacity", "qubit", "--theta", "0", "--phi", "0").stdout.strip(), "1")
        self.assertEqual(run("capacity", "gaussian", "--q", "0.5").stdout.strip(), "0")
        self.assertEqual(run("capacity", "gaussian", "--q", "2").stdout.strip(), "1")
        self.assertEqual(run("capacity", "--q", "1").stdout.strip(), "inf")
        r = run("capacity", "--theta", str(math.pi / 4), "--phi", str(math.pi / 4))
        self.assertEqual(r.returncode, 0)
        self.assertLess(abs(float(r.stdout)), 1e-9)

    def test_bad_arguments(self):
        self.assertEqual(run("capacity", "qubit", "--theta", "0.1").returncode, 2)
        self.assertEqual(run("capacity", "--theta", "0.1", "--phi", "0.1", "--q", "2").returncode, 2)
        self.assertEqual(run("capacity", "gaussian", "--theta", "0.1").returncode, 2)
        self.assertEqual(run("capacity", "--q", "-1").returncode, 2)
        self.assertEqual(run("capacity", "qubit", "--theta", "2", "--phi", "0").returncode, 2)


class Sweeps(unittest.TestCase):
    def test_default_qubit_sweep(self):
        r = run("qubit-sweep", "--threads", "0")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = data_lines(r.stdout)
        self.assertEqual(rows[0], QUBIT_HEADER)
        self.assertEqual(len(rows), 37)
        comments = [l for l in r.stdout.splitlines() if l.startswith("# config: ")]
        cfg = json.loads(comments[0][len("# config: "):])
        self.assertEqual(cfg["seed"], 42)
        self.assertEqual(cfg["n_targets"], 1000)

    def test_default_gaussian_sweep(self):
        r = run("gaussian-sweep")
        self.assertEqual(r.returncode, 0, r.stderr)
        rows = data_lines(r.stdout)
        self.assertEqual(rows[0], GAUSS_HEADER)
        self.assertEqual(len(rows), 102)
        table = list(csv.DictReader(io.StringIO("\n".join(rows))))
        self.assertEqual(sum(1 for t in table if t["Q"] == "inf"), 1)

    def test_repeat_is_byte_identical(self):
        with tempfile.TemporaryDirectory() as d:
            a, b, c = (os.path.join(d, n) for n in "abc")
            for path, threads in ((a, "1"), (b, "1"), (c, "3")):
                r = run("qubit-sweep", "--n-targets", "10", "--seed", "7", "--threads", threads, "--out", path)
                self.assertEqual(r.returncode, 0, r.stderr)
            data = [read_bytes(p) for p in (a, b, c)]
            self.assertEqual(data[0], data[1])
            self.assertEqual(data[0], data[2])

    def test_seed_changes_output(self):
        a = run("gaussian-sweep", "--n-targets", "5", "--q-steps", "6", "--seed", "1").stdout
        b = run("gaussian-sweep", "--n-targets", "5", "--q-steps", "6", "--seed", "2").stdout
        self.assertNotEqual(data_lines(a)[1:], data_lines(b)[1:])

    def test_validation(self):
        self.assertEqual(run("qubit-sweep", "--theta-grid", "0.9").returncode, 2)
        self.assertEqual(run("gaussian-sweep", "--q-min", "0.5", "--q-max", "0.4").returncode, 2)
        self.assertEqual(run("gaussian-sweep", "--cost", "bogus").returncode, 2)
        self.assertEqual(run("qubit-sweep", "--n-targets", "0").returncode, 2)
        self.assertEqual(run("qubit-sweep", "--format", "xml").returncode, 2)
        self.assertEqual(run("nonsense").returncode, 2)

    def test_literal_cost(self):
        r = run("gaussian-sweep", "--cost", "matrix-uhlmann", "--n-targets", "5", "--q-steps", "6")
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertIn('"cost":"matrix-uhlmann"', r.stdout)

    def test_json_format(self):
        r = run("gaussian-sweep", "--n-targets", "5", "--q-min", "0.5", "--q-max", "1.5", "--q-steps", "3",
                "--format", "json")
        doc = json.loads(r.stdout)
        self.assertEqual(doc["columns"], GAUSS_HEADER.split(","))
        self.assertEqual(len(doc["rows"]), 3)
        self.assertEqual(doc["rows"][1]["Q"], "inf")
        self.assertEqual(doc["config"]["q_steps"], 3)

    def test_config_file_and_override(self):
        with tempfile.TemporaryDirectory() as d:
            cfg = os.path.join(d, "c.json")
            with open(cfg, "w") as f:
                json.dump({"n_targets": 4, "seed": 3, "theta-grid": [0.1, 0.2], "phi_grid": [0.3]}, f)
            r = run("qubit-sweep", "--config", cfg, "--seed", "9")
            self.assertEqual(r.returncode, 0, r.stderr)
            rows = data_lines(r.stdout)
            self.assertEqual(len(rows), 3)
            echoed = json.loads([l for l in r.stdout.splitlines() if l.startswith("# config: ")][0][10:])
            self.assertEqual(echoed["seed"], 9)
            self.assertEqual(echoed["n_targets"], 4)
            self.assertEqual(echoed["theta_grid"], [0.1, 0.2])

            with open(cfg, "w") as f:
                json.dump({"no_such_flag": 1}, f)
            self.assertEqual(run("qubit-sweep", "--config", cfg).returncode, 2)
            with open(cfg, "w") as f:
                f.write("{not json")
            self.assertEqual(run("qubit-sweep", "--config", cfg).returncode, 2)

    def test_log_levels(self):
        quiet = run("capacity", "--q", "2")
        self.assertEqual(quiet.stderr, "")
        chatty = run("gaussian-sweep", "--n-targets", "2", "--q-steps", "2", env={"FQC_LOG": "debug"})
        self.assertIn("resolved config", chatty.stderr)


class Fit(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.dir = tempfile.TemporaryDirectory()
        cls.qubit_csv = os.path.join(cls.dir.name, "q.csv")
        cls.gauss_csv = os.path.join(cls.dir.name, "g.csv")
        r = run("qubit-sweep", "--n-targets", "30", "--out", cls.qubit_csv)
        assert r.returncode == 0, r.stderr
        r = run("gaussian-sweep", "--n-targets", "30", "--q-steps", "26", "--out", cls.gauss_csv)
        assert r.returncode == 0, r.stderr

    @classmethod
    def tearDownClass(cls):
        cls.dir.cleanup()

    def fit(self, *args):
        r = run("fit", *args)
        self.assertEqual(r.returncode, 0, r.stderr)
        return json.loads(r.stdout)

    def test_fields_and_row_accounting(self):
        for path in (self.qubit_csv, self.gauss_csv):
            doc = self.fit(path, "--model", "i")
            for key in ("model", "coefficients", "zeta", "window", "n_points_used", "input_digest", "config"):
                self.assertIn(key, doc)
            self.assertEqual(doc["n_points_used"] + doc["n_clamped"] + doc["n_infinite"], doc["n_rows"])
        self.assertEqual(self.fit(self.gauss_csv)["n_infinite"], 1)

    def test_models_and_window(self):
        for m in ("i", "ii", "iii"):
            doc = self.fit(self.qubit_csv, "--model", m)
            self.assertEqual(doc["model"], m)
            self.assertEqual(len(doc["coefficients"]), 2 if m == "i" else 3)
        doc = self.fit(self.gauss_csv, "--window", "5:15")
        self.assertEqual(doc["window"], [5, 15])

    def test_max_statistic_and_theta_filter(self):
        doc = self.fit(self.qubit_csv, "--stat", "max", "--theta-min", str(2 * math.pi / 24 - 1e-9))
        self.assertEqual(doc["n_excluded"], 6)
        self.assertEqual(doc["n_points_used"] + doc["n_clamped"] + doc["n_infinite"], 30)

    def test_digest_follows_rows_not_comments(self):
        text = read_text(self.gauss_csv)
        other = os.path.join(self.dir.name, "other.csv")
        with open(other, "w") as f:
            f.write("# edited comment\n" + text)
        self.assertEqual(self.fit(self.gauss_csv)["input_digest"], self.fit(other)["input_digest"])
        lines = text.splitlines()
        lines[-1] = lines[-1].replace(",30,", ",31,", 1)
        with open(other, "w") as f:
            f.write("\n".join(lines) + "\n")
        self.assertNotEqual(self.fit(self.gauss_csv)["input_digest"], self.fit(other)["input_digest"])

    def test_power_law_recovery(self):
        b1, b2, b3 = 6.5, 2.25, 1.4
        path = os.path.join(self.dir.name, "power.csv")
        with open(path, "w") as f:
            f.write(GAUSS_HEADER + "\n")
            for i in range(20):
                q = 1.1 + 0.1 * i
                cap = math.log2(q / (q - 1))
                y = b1 * cap ** b3 + b2
                err = 2.0 ** -y
                f.write(f"{q!r},{cap!r},1,0,{err!r},{y!r},0,{err!r},1\n")
        doc = self.fit(path, "--model", "ii")
        self.assertLess(abs(doc["coefficients"][2] - b3), 1e-6)

    def test_errors(self):
        bad = os.path.join(self.dir.name, "bad.csv")
        with open(bad, "w") as f:
            f.write("not,a,sweep\n1,2,3\n")
        self.assertEqual(run("fit", bad).returncode, 2)
        self.assertEqual(run("fit", os.path.join(self.dir.name, "missing.csv")).returncode, 2)
        self.assertEqual(run("fit", self.qubit_csv, "--window", "5").returncode, 2)
        self.assertEqual(run("fit", self.qubit_csv, "--format", "csv").returncode, 2)
        short = os.path.join(self.dir.name, "short.csv")
        lines = read_text(self.gauss_csv).splitlines()
        with open(short, "w") as f:
            f.write("\n".join([l for l in lines if l.startswith("#")] + [GAUSS_HEADER] + data_lines("\n".join(lines))[5:7]) + "\n")
        self.assertEqual(run("fit", short).returncode, 4)
        self.assertEqual(run("fit", self.gauss_csv, "--window", "100:200").returncode, 4)

    def test_stdin_input(self):
        text = read_text(self.qubit_csv)
        r = subprocess.run([FQC, "fit", "-"], input=text, capture_output=True, text=True,
                           env=dict(os.environ, FQC_LOG="silent"))
        self.assertEqual(r.returncode, 0)
        self.assertEqual(json.loads(r.stdout)["input_digest"], self.fit(self.qubit_csv)["input_digest"])


if __name__ == "__main__":
    FQC = sys.argv.pop(1)
    unittest.main(verbosity=2)
