"""The command-line interface, driven from Python.

Equivalent shell commands:
    cogrowth count --preset s3 --nmax 10 --format json --out s3.json
    cogrowth verify --counts s3.json
    cogrowth asymptotics --preset z2xz2 --nmax 30 --format csv
"""
import json
import tempfile
from pathlib import Path

from cogrowth.cli import main

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "s3.json"
    main(["count", "--preset", "s3", "--nmax", "10", "--format", "json", "--out", str(path)])
    print("verify exit code:", main(["verify", "--counts", str(path)]))

    data = json.loads(path.read_text())
    data["walk"][4] = str(int(data["walk"][4]) + 1)
    path.write_text(json.dumps(data))
    print("verify exit code after corrupting W_4:", main(["verify", "--counts", str(path)]))

main(["asymptotics", "--preset", "z2xz2", "--nmax", "30", "--format", "csv"])
