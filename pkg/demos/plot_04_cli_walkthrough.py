"""
Driving the command line from Python
====================================

The ``codecomp`` command wraps the library.  Every run is reproducible from
its ``--seed``, and ``--verify`` attaches the error rates that back the
verdict.
"""

import json
import subprocess
import sys


def codecomp(*args):
    proc = subprocess.run([sys.executable, "-m", "codecomp", *args], capture_output=True, text=True)
    print("$ codecomp", " ".join(args), f"  (exit {proc.returncode})")
    return proc.stdout


out = codecomp("compare-awgn", "--code", "rep:3", "--code", "rep:1", "--verify",
               "--trials", "1e5", "--messages", "all", "--seed", "7")
report = json.loads(out)
print("relation:", report["relation"], " consistent:", report["verification"]["consistent"])

out = codecomp("compare-discrete", "--code", "hamming:3", "--channel", "bsc:0.05",
               "--channel", "bsc:0.15", "--all-bits", "--verify", "--output", "json")
for entry in json.loads(out)["bits"]:
    v = entry["verification"]
    print(f"  bit {entry['bit']}: {entry['relation']:>15}  "
          f"{v['first']['value']:.5f} vs {v['second']['value']:.5f}")

print(codecomp("export-zonotope", "--code", "rep:3", "--channel", "bsc:0.1"))
