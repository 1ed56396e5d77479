# %% [markdown]
# # Problem files and the command line
#
# Problems are JSON documents with exact rationals. The same file drives the
# library and the `nexcert` command.

# %%
import json
import tempfile
from pathlib import Path

from nexcert.cli import main
from nexcert.serialize import loads_problem

problem = {
    "norm": {"kind": "sup", "n": 2},
    "map": {"op": "min", "args": [{"op": "identity", "n": 2}, {"op": "constant", "value": ["1/2", [3, 4]]}]},
    "query": {"type": "surjective"},
    "seed": 3,
}
p = loads_problem(json.dumps(problem))
print(p.dumps())

# %%
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "clip.json"
    path.write_text(json.dumps(problem))
    code = main([str(path), "--verify", "--output", str(Path(tmp) / "report.json")])
    report = json.loads((Path(tmp) / "report.json").read_text())
print("exit code", code, report["certificate"]["verdict"], report["oracle"]["check"])
