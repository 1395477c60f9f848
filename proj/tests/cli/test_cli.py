#!/usr/bin/env python3
# Copyright 2026 The vidstruct Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""End-to-end checks of the vidstruct command-line tool and report schema."""

import argparse
import json
import os
import subprocess
import sys
import tempfile
import unittest

import jsonschema

ARGS = None


def run(*argv, **kwargs):
    return subprocess.run([ARGS.cli, *argv], capture_output=True, text=True, **kwargs)


class CliTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        with open(ARGS.schema, encoding="utf-8") as f:
            cls.validator = jsonschema.Draft202012Validator(json.load(f))
        cls.tmp = tempfile.TemporaryDirectory()
        cls.dir = cls.tmp.name
        cls.clip = os.path.join(cls.dir, "dissolve_02.y4m")
        r = run("synth", os.path.join(ARGS.corpus, "dissolve_02.clip"), "--out", cls.clip)
        assert r.returncode == 0, r.stderr

    @classmethod
    def tearDownClass(cls):
        cls.tmp.cleanup()

    def path(self, name):
        return os.path.join(self.dir, name)

    def analyze(self, *extra, expect=0):
        out = self.path("report_%d.json" % abs(hash(extra)))
        r = run("analyze", self.clip, "--json", out, *extra)
        self.assertEqual(r.returncode, expect, r.stderr)
        with open(out, encoding="utf-8") as f:
            report = json.load(f)
        self.validator.validate(report)
        return report

    def test_analyze_writes_schema_valid_report(self):
        report = self.analyze()
        self.assertFalse(report["incomplete"])
        with open(self.clip + ".truth.json", encoding="utf-8") as f:
            truth = json.load(f)
        self.assertEqual(len(report["shots"]), len(truth["shots"]))
        self.assertEqual(report["input"]["frame_count"], truth["frame_count"])

    def test_stdout_report(self):
        r = run("analyze", self.clip)
        self.assertEqual(r.returncode, 0, r.stderr)
        self.validator.validate(json.loads(r.stdout))

    def test_sidecar_records_dissolve_length(self):
        script = self.path("d2.clip")
        with open(script, "w", encoding="utf-8") as f:
            f.write("width = 64\nheight = 48\n[segment]\nseed = 1\nlength = 60\n"
                    "transition = dissolve 2\n[segment]\nseed = 2\nlength = 60\n")
        out = self.path("d2.y4m")
        r = run("synth", script, "--out", out)
        self.assertEqual(r.returncode, 0, r.stderr)
        with open(out + ".truth.json", encoding="utf-8") as f:
            truth = json.load(f)
        self.assertEqual(truth["frame_count"], 122)
        self.assertEqual(truth["boundaries"], [{"t": 59, "K": 3}])

    def test_missing_input_exits_2_without_report(self):
        out = self.path("missing.json")
        r = run("analyze", self.path("does_not_exist.y4m"), "--json", out)
        self.assertEqual(r.returncode, 2)
        self.assertFalse(os.path.exists(out))

    def test_bad_config_exits_3(self):
        cfg = self.path("bad.cfg")
        with open(cfg, "w", encoding="utf-8") as f:
            f.write("theta_kf = 0.5\nno_such_key = 1\n")
        r = run("analyze", self.clip, "--config", cfg, "--json", self.path("x.json"))
        self.assertEqual(r.returncode, 3)
        self.assertIn("bad.cfg:2", r.stderr)

    def test_out_of_range_flag_exits_3(self):
        r = run("analyze", self.clip, "--theta-kf", "-1", "--json", self.path("x.json"))
        self.assertEqual(r.returncode, 3)

    def test_unknown_flag_exits_3(self):
        r = run("analyze", self.clip, "--no-such-flag", "1")
        self.assertEqual(r.returncode, 3)

    def test_truncated_input_exits_4_with_report(self):
        with open(self.clip, "rb") as f:
            data = f.read()
        truncated = self.path("truncated.y4m")
        with open(truncated, "wb") as f:
            f.write(data[: len(data) * 2 // 3])
        out = self.path("truncated.json")
        r = run("analyze", truncated, "--json", out)
        self.assertEqual(r.returncode, 4, r.stderr)
        with open(out, encoding="utf-8") as f:
            report = json.load(f)
        self.validator.validate(report)
        self.assertTrue(report["incomplete"])
        self.assertTrue(report["error"])

    def test_keyframe_export_matches_report(self):
        kdir = self.path("keys")
        report = self.analyze("--keyframes", kdir)
        expected = sorted("frame_%08d.pgm" % k for s in report["shots"] for k in s["keyframes"])
        self.assertEqual(sorted(os.listdir(kdir)), expected)
        with open(os.path.join(kdir, expected[0]), "rb") as f:
            self.assertTrue(f.read(2) == b"P5")

    def test_precedence_flag_over_file_over_default(self):
        default = self.analyze()["config_echo"]["theta_kf"]
        cfg = self.path("kf.cfg")
        with open(cfg, "w", encoding="utf-8") as f:
            f.write("# keyframe threshold\ntheta_kf = 0.75\n")
        self.assertEqual(self.analyze("--config", cfg)["config_echo"]["theta_kf"], 0.75)
        self.assertEqual(self.analyze("--config", cfg, "--theta-kf", "1.5")["config_echo"]["theta_kf"], 1.5)
        self.assertNotEqual(default, 0.75)

    def test_thread_count_does_not_change_results(self):
        one = self.analyze("--threads", "1")
        eight = self.analyze("--threads", "8")
        for report in (one, eight):
            report.pop("timing", None)
            report["config_echo"].pop("threads", None)
        self.assertEqual(one, eight)

    def test_list_corpus(self):
        r = run("synth", "--list-corpus")
        self.assertEqual(r.returncode, 0)
        names = r.stdout.split()
        self.assertIn("static", names)
        self.assertEqual(len(names), len([n for n in os.listdir(ARGS.corpus) if n.endswith(".clip")]))

    def test_synth_bundled_name(self):
        out = self.path("static.y4m")
        r = run("synth", "static", "--out", out, "--truth", self.path("static_truth.json"))
        self.assertEqual(r.returncode, 0, r.stderr)
        self.assertTrue(os.path.exists(self.path("static_truth.json")))

    def test_malformed_script_reports_line(self):
        script = self.path("bad.clip")
        with open(script, "w", encoding="utf-8") as f:
            f.write("width = 64\nheight = 48\nframe_rate = nope\n")
        r = run("synth", script, "--out", self.path("bad.y4m"))
        self.assertEqual(r.returncode, 3)
        self.assertIn("bad.clip:3", r.stderr)

    def test_version(self):
        r = run("--version")
        self.assertEqual(r.returncode, 0)
        self.assertTrue(r.stdout.strip())


def main():
    global ARGS
    parser = argparse.ArgumentParser()
    parser.add_argument("--cli", required=True)
    parser.add_argument("--schema", required=True)
    parser.add_argument("--corpus", required=True)
    ARGS, rest = parser.parse_known_args()
    unittest.main(argv=[sys.argv[0], "-v", *rest])


if __name__ == "__main__":
    main()
