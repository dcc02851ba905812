"""Runs the specflow CLI and validates each JSON output against its schema."""

import json
import pathlib
import subprocess
import sys
import tempfile

import jsonschema
from referencing import Registry, Resource

CASES = [
    ("flow_certificate.json", "flow-certificate", ["flow", "--family", "baer", "--m", "3"]),
    ("flow_certificate.json", "flow-certificate", ["flow", "--family", "random", "--dim", "6", "--seed", "4"]),
    ("flow_certificate.json", "flow-certificate", ["flow", "--family", "glue", "--m", "2", "--window-cap", "0.5"]),
    ("component_report.json", "component-report", ["components", "--k", "4", "--dim", "16"]),
    ("oracle.json", "oracle", ["oracle", "--family", "circle", "--winding", "-2"]),
    ("property_report.json", "property-report",
     ["check", "--invertible-paths", "3", "--pairs", "3", "--homotopies", "2"]),
]


def main() -> int:
    cli, schema_dir, config_dir = (pathlib.Path(p) for p in sys.argv[1:4])
    schemas = {p.name.removesuffix(".schema.json"): json.loads(p.read_text()) for p in schema_dir.glob("*.json")}
    registry = Registry().with_resources(
        (f"{name}.schema.json", Resource.from_contents(s)) for name, s in schemas.items())

    def check(instance, name, what):
        validator = jsonschema.Draft202012Validator(schemas[name], registry=registry)
        errors = sorted(validator.iter_errors(instance), key=str)
        for e in errors[:5]:
            print(f"FAIL {what}: {e.message} at {list(e.absolute_path)}")
        if not errors:
            print(f"ok   {what}")
        return not errors

    ok = True
    for cfg in sorted(config_dir.glob("*.json")):
        ok &= check(json.loads(cfg.read_text()), "config", cfg.name)
    with tempfile.TemporaryDirectory() as tmp:
        for i, (file, name, args) in enumerate(CASES):
            out = pathlib.Path(tmp) / str(i)
            run = subprocess.run([str(cli), *args, "--out", str(out)], capture_output=True, text=True)
            if run.returncode != 0:
                print(f"FAIL {' '.join(args)}: exit {run.returncode}: {run.stderr.strip()}")
                ok = False
                continue
            ok &= check(json.loads((out / file).read_text()), name, " ".join(args))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
