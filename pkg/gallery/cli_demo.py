"""Run a bundled scenario through the command line interface.

The report is deterministic JSON.  Exit codes: 0 success, 1 invalid input,
2 unsupported rule combination, 3 size cap exceeded, 4 other errors.
"""

import json
import pathlib
import subprocess
import sys
import tempfile

root = pathlib.Path(__file__).resolve().parent.parent
scenario = root / "scenarios" / "gr2_omega.json"

with tempfile.TemporaryDirectory() as tmp:
    out = pathlib.Path(tmp) / "report.json"
    proc = subprocess.run([sys.executable, "-m", "indflag", "--scenario", str(scenario),
                           "--out", str(out), "--dot-dir", tmp], capture_output=True, text=True)
    print("exit code", proc.returncode)
    report = json.loads(out.read_text())
    for entry in report["results"]:
        print(f"  {entry['kind']:9} {entry.get('id', ''):12} {json.dumps(entry.get('result'))[:70]}")
    for dot in sorted(pathlib.Path(tmp).glob("*.dot")):
        print(f"\n{dot.name}:")
        print("\n".join(dot.read_text().splitlines()[:6]) + "\n  ...")
