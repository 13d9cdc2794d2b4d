import sys
from pathlib import Path

import pytest

from sexdoc.pipeline import ProjectConfig, compile_manual
from sexdoc.reader import SourceSymbol

CORPUS = Path(__file__).parent / "corpus"


def pytest_runtest_logreport(report):
    """One visible pass/fail line per acceptance criterion."""
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1].removeprefix("test_")
    outcome = "PASS" if report.passed else "FAIL"
    print(f"[acceptance] {name}: {outcome}", file=sys.stderr)


def sym(package: str, name: str) -> SourceSymbol:
    return SourceSymbol(package.upper(), name.upper())


def make_config(sources, package="ACL2", root=None, base_dir=None, **kw):
    return ProjectConfig(
        sources=[str(s) for s in sources],
        package=package,
        root=root,
        base_dir=base_dir or CORPUS,
        **kw,
    )


@pytest.fixture(scope="session")
def getopt_build():
    return compile_manual(make_config([CORPUS / "getopt.lisp"]))


@pytest.fixture(scope="session")
def oslib_build():
    return compile_manual(
        make_config(
            [CORPUS / "oslib" / "main.lisp", CORPUS / "oslib" / "extra.lisp"],
            package="OSLIB",
            root=sym("OSLIB", "OSLIB"),
        )
    )


@pytest.fixture(scope="session")
def arithmetic_build():
    return compile_manual(make_config([CORPUS / "arithmetic.lisp"]))


@pytest.fixture(scope="session")
def vl_build():
    return compile_manual(
        make_config([CORPUS / "vl.lisp"], package="VL", root=sym("VL", "VL-STMT-P"))
    )


@pytest.fixture(scope="session")
def bitops_build():
    return compile_manual(
        make_config([CORPUS / "bitops.lisp"], package="BITOPS", root=sym("BITOPS", "BITOPS"))
    )
