"""Bundled example signatures (``*.pcbpv``)."""

from importlib import resources

from ..parser import parse_lambda_signature, parse_signature

LAMBDA = frozenset({"cbn", "cbv"})


def names() -> list:
    return sorted(p.name[:-6] for p in resources.files(__name__).iterdir() if p.name.endswith(".pcbpv"))


def text(name: str) -> str:
    return resources.files(__name__).joinpath(f"{name}.pcbpv").read_text(encoding="utf-8")


def path(name: str) -> str:
    """Filesystem path of a corpus file (the package is installed unzipped)."""
    return str(resources.files(__name__).joinpath(f"{name}.pcbpv"))


def load(name: str):
    parse = parse_lambda_signature if name in LAMBDA else parse_signature
    return parse(text(name), f"{name}.pcbpv")
