"""Validate shipped scenarios and freshly generated sidecars against the JSON schemas."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    cli, root = sys.argv[1], pathlib.Path(sys.argv[2])
    scenario_schema = json.loads((root / "schemas/scenario.schema.json").read_text())
    sidecar_schema = json.loads((root / "schemas/sidecar.schema.json").read_text())
    failures = 0
    with tempfile.TemporaryDirectory() as tmp:
        for path in sorted((root / "scenarios").glob("*.json")):
            try:
                jsonschema.validate(json.loads(path.read_text()), scenario_schema)
                out = pathlib.Path(tmp) / path.stem
                out.mkdir()
                subprocess.run([cli, "simulate", str(path), "--out", str(out)], check=True)
                jsonschema.validate(json.loads((out / f"{path.stem}.meta.json").read_text()), sidecar_schema)
                subprocess.run([cli, "simulate", str(path), "--out", str(out), "--format", "json"], check=True)
                jsonschema.validate(json.loads((out / f"{path.stem}.json").read_text()), sidecar_schema)
                print(f"ok   {path.name}")
            except (jsonschema.ValidationError, subprocess.CalledProcessError) as err:
                failures += 1
                print(f"FAIL {path.name}: {err}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
