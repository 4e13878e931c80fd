"""Run `bubbly defect` on the shipped configs and validate each report against the JSON schema."""
import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema


def main() -> int:
    tool, schema_path, config_dir = sys.argv[1:4]
    schema = json.loads(pathlib.Path(schema_path).read_text())
    jsonschema.Draft202012Validator.check_schema(schema)
    validator = jsonschema.Draft202012Validator(schema)
    failures = 0
    for name in ("dilute", "nondilute"):
        with tempfile.TemporaryDirectory() as out:
            cmd = [tool, "defect", "--config", f"{config_dir}/{name}.cfg", "--out", out, "--formats", "json"]
            subprocess.run(cmd, check=True, stdout=subprocess.DEVNULL)
            report = json.loads((pathlib.Path(out) / "defect.json").read_text())
        errors = list(validator.iter_errors(report))
        for e in errors:
            print(f"{name}: {e.json_path}: {e.message}")
        failures += len(errors)
        print(f"{name}: {'valid' if not errors else 'INVALID'} (exists={report['exists']})")
    # A report without a mode must also be accepted, and a mode without omega_eps rejected.
    absent = dict(report, exists=False, omega_eps=None, residual=None, source_pair=[])
    if not validator.is_valid(absent):
        print("no-mode report rejected:", [e.message for e in validator.iter_errors(absent)])
        failures += 1
    if validator.is_valid(dict(report, omega_eps=None)):
        print("schema accepts exists=true without omega_eps")
        failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
