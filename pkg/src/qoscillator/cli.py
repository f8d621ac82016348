"""Command line entry point: ``qosc verify | virasoro | qcalc | report-schema``.

Exit codes: 0 all expected relations passed, 1 a relation failed, 2 usage or
invalid parameters, 3 dimension cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, dataclass, field, fields

from . import bargmann, cyclic, fockrep, qcalc, virasoro
from .errors import InvalidParameterError, ResourceError, UnsupportedModeError
from .opcore import ResidualRecord, check_matrices, check_suite, relation_suite_oscillator
from .report import REPORT_SCHEMA, assemble

log = logging.getLogger("qoscillator")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
REALIZATIONS = ("fock", "bargmann", "cyclic")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    subcommand: str = "verify"
    n_modes: int = 1
    N: int | None = None
    q_real: float | None = None
    realization: str = "fock"
    cutoff: int = 8
    truncation: int = qcalc.DEFAULT_TRUNCATION
    tolerance: float = 1e-10
    exponent_mode: str = cyclic.ExponentMode.SQUARED_H_Q2.value
    out: str | None = None
    cap: int = fockrep.DEFAULT_CAP
    window: int | None = None
    extra_m: list[int] = field(default_factory=list)
    classical_limit: bool = False

    def param(self) -> qcalc.QParameter:
        if (self.N is None) == (self.q_real is None):
            raise UsageError("give exactly one of --N or --q-real")
        return qcalc.q_from_root(self.N) if self.N is not None else qcalc.q_real(self.q_real)

    def validate(self):
        if self.realization not in REALIZATIONS:
            raise UsageError(f"unknown realization {self.realization!r}")
        if self.n_modes < 1:
            raise UsageError("--n must be >= 1")
        try:
            cyclic.ExponentMode(self.exponent_mode)
        except ValueError:
            raise UsageError(f"unknown exponent mode {self.exponent_mode!r}") from None
        if self.classical_limit:
            return
        if self.realization in ("fock", "cyclic") and self.N is None:
            raise UsageError(f"the {self.realization} realization needs q a root of unity (--N)")

    def metadata(self) -> dict:
        d = asdict(self)
        d.pop("out")
        return d


# keys the optional JSON config file may set
_CONFIG_KEYS = {f.name for f in fields(RunConfig)} - {"subcommand"}


def _flag_map(ns: argparse.Namespace) -> dict:
    m = {
        "n_modes": ns.n, "N": ns.N, "q_real": ns.q_real, "realization": ns.realization,
        "cutoff": ns.cutoff, "truncation": ns.truncation, "tolerance": ns.tolerance,
        "exponent_mode": ns.exponent_mode, "out": ns.out, "cap": ns.cap,
    }
    if ns.command == "virasoro":
        m.update(window=ns.window, extra_m=ns.m, classical_limit=ns.classical_limit or None)
    return {k: v for k, v in m.items() if v is not None}


def build_config(ns: argparse.Namespace) -> RunConfig:
    """Defaults, overridden by the config file, overridden by flags."""
    values: dict = {}
    if ns.config:
        with open(ns.config) as fh:
            file_values = json.load(fh)
        unknown = set(file_values) - _CONFIG_KEYS
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        values.update(file_values)
    values.update(_flag_map(ns))
    if ns.command == "virasoro" and "cutoff" not in values and values.get("classical_limit"):
        values["cutoff"] = 10
    cfg = RunConfig(subcommand=ns.command, **values)
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------


def _scalar_record(rid: str, got: complex, want: complex, tol: float, relative: bool = False) -> ResidualRecord:
    scale = max(1.0, abs(want)) if relative else max(1.0, abs(got))
    res = abs(got - want) / scale
    return ResidualRecord(rid, float(res), float(scale), bool(res <= tol), float(tol))


def qcalc_records(p: qcalc.QParameter, K: int, n_vars: int, max_exponent: int) -> list[ResidualRecord]:
    q = p.q.real
    recs = []
    for x in (0.1, 0.5, 1.0):
        lhs = qcalc.q_exponential(p, q * x, K)
        rhs = (1 - (1 - q) * x) * qcalc.q_exponential(p, x, K)
        recs.append(_scalar_record(f"eq14.x{x}", lhs, rhs, 1e-10))
    for n in range(11):
        recs.append(_scalar_record(
            f"eq17.n{n}", qcalc.radial_moment(p, n, K), qcalc.q_factorial(p, n), 1e-8, relative=True))
    for ea, eb, val in bargmann.orthonormality_table(p, n_vars, max_exponent, K=K):
        tag = lambda e: ",".join(map(str, e))
        recs.append(_scalar_record(f"eq16.u({tag(ea)}).u({tag(eb)})", val, float(ea == eb), 1e-8))
    return recs


def _abar_power_finding(records, basis: str, n: int) -> dict:
    by_id = {r.relation_id: r for r in records}
    return {
        "kind": "abar_power_N",
        "basis": basis,
        "abar_pow_N_is_zero": [by_id[f"eq10.abar_power_zero.{i}"].passed for i in range(1, n + 1)],
        "abar_pow_N_is_identity": [by_id[f"eq10.abar_power_identity.{i}"].passed for i in range(1, n + 1)],
    }


def cmd_verify(cfg: RunConfig):
    p = cfg.param()
    tol, n = cfg.tolerance, cfg.n_modes
    findings: list[dict] = []
    if cfg.realization == "fock":
        rep = fockrep.build_fock_rep(n, cfg.N, cfg.cap)
        records = check_suite(rep, relation_suite_oscillator(p, n, cfg.N), tol)
        findings.append(_abar_power_finding(records, "fock", n))
        findings.append({"kind": "star_compatible", "value": fockrep.is_star_compatible(rep)})
    elif cfg.realization == "bargmann":
        rep = bargmann.build_bargmann_rep(p, n, cfg.cutoff, cfg.cap)
        records = check_suite(rep, relation_suite_oscillator(p, n, p.N), tol)
        if p.is_root_of_unity:
            findings.append(_abar_power_finding(records, "polynomial", n))
            if cfg.cutoff >= p.N:
                for name, dist in bargmann.fock_agreement(p, n, cfg.cutoff).items():
                    records.append(ResidualRecord(
                        f"bargmann.fock_agreement.{name}", dist, 1.0, dist <= tol, tol))
        else:
            records += qcalc_records(p, cfg.truncation, n, min(5, cfg.cutoff))
    else:
        shift = cyclic.build_shift_ops(p, n, cfg.cap)
        records = check_suite(shift, cyclic.relation_suite_shift(p, n), tol)
        real = cyclic.build_cyclic_rep(p, n, cfg.exponent_mode, cfg.cap, tol)
        records += real.records
        scan = cyclic.mode_scan(n, cfg.N, tol, cfg.cap)
        findings.append({
            "kind": "exponent_mode_scan",
            "max_residual": scan,
            "conforming": sorted(cyclic.conforming_modes(scan, tol)),
            "selected": real.mode.value,
            "algebra_parameter": real.rep.params.describe(),
        })
        findings.append(_abar_power_finding(real.records, "grid", n))
    for r in records:
        if not r.expected_pass:
            findings.append({"kind": "not_expected", "relation_id": r.relation_id, "passed": r.passed,
                             "residual": r.residual})
    return assemble(records, findings, cfg.metadata())


def cmd_virasoro(cfg: RunConfig):
    findings: list[dict] = []
    if cfg.classical_limit:
        rows = virasoro.classical_limit_probe(virasoro.CLASSICAL_Q, cfg.cutoff)
        records = [ResidualRecord(f"limit.q{r.q}", r.residual, 1.0, r.residual <= 10 * (1 - r.q), 10 * (1 - r.q))
                   for r in rows]
        verdict = virasoro.limit_verdict(rows)
        records.append(ResidualRecord("limit.scaling", 0.0 if verdict["passed"] else 1.0, 1.0, verdict["passed"], 0.0))
        findings.append({"kind": "classical_limit", "table": [[r.q, r.residual] for r in rows], **verdict})
        return assemble(records, findings, cfg.metadata())

    p = cfg.param()
    n = cfg.n_modes
    if cfg.realization == "fock":
        rep = fockrep.build_fock_rep(n, cfg.N, cfg.cap)
    elif cfg.realization == "bargmann":
        rep = bargmann.build_bargmann_rep(p, n, cfg.cutoff, cfg.cap)
    else:
        rep = cyclic.build_cyclic_rep(p, n, cfg.exponent_mode, cfg.cap, cfg.tolerance).rep
    window = virasoro.default_window(rep) if cfg.window is None else range(-1, cfg.window + 1)
    window = sorted(set(window) | set(cfg.extra_m))
    virasoro.require_window_buildable(rep, window)
    tol = max(cfg.tolerance, virasoro.VIRASORO_TOLERANCE)
    check = virasoro.check_virasoro(rep, window, tol)
    records = list(check.records)
    for i in range(1, n + 1):
        for m in window:
            l = virasoro.build_l(rep, i, m)
            back = virasoro.l_from_L(rep, i, virasoro.build_L(rep, i, m))
            records.append(check_matrices(f"eq23.roundtrip.i{i}.m{m}", l.matrix, back.matrix, 1e-12,
                                          subspace=rep.subspace))
    return assemble(records, check.findings, cfg.metadata())


def _fmt(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return format(z.real, ".17g")
    return f"{z.real:.17g}{z.imag:+.17g}j"


def cmd_qcalc(ns: argparse.Namespace) -> str:
    if (ns.N is None) == (ns.q_real is None):
        raise UsageError("give exactly one of --N or --q-real")
    p = qcalc.q_from_root(ns.N) if ns.N is not None else qcalc.q_real(ns.q_real)
    need = {"qnum": "x", "qfact": "n", "exp": "x", "jackson": "moment"}[ns.op]
    arg = getattr(ns, need)
    if arg is None:
        raise UsageError(f"qcalc {ns.op} needs --{need}")
    if ns.op == "qnum":
        val = qcalc.q_number(p, int(arg))
    elif ns.op == "qfact":
        val = qcalc.q_factorial(p, int(arg))
    elif ns.op == "exp":
        val = qcalc.q_exponential(p, complex(arg), ns.truncation)
    else:
        val = qcalc.radial_moment(p, int(arg), ns.truncation)
    return _fmt(val)


# ---------------------------------------------------------------------------


def _add_common(sp: argparse.ArgumentParser):
    sp.add_argument("--n", type=int, help="number of modes (default 1)")
    sp.add_argument("--N", type=int, help="root order: q = exp(2 pi i/N)")
    sp.add_argument("--q-real", type=float, help="real deformation parameter in (0, 1)")
    sp.add_argument("--realization", choices=REALIZATIONS)
    sp.add_argument("--cutoff", type=int, help="polynomial exponent cutoff D")
    sp.add_argument("--truncation", type=int, help="series/Jackson truncation K")
    sp.add_argument("--tolerance", type=float)
    sp.add_argument("--exponent-mode", choices=[m.value for m in cyclic.ExponentMode])
    sp.add_argument("--out", help="write the JSON report here instead of stdout")
    sp.add_argument("--cap", type=int, help="dimension cap")
    sp.add_argument("--config", help="JSON file with RunConfig fields")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qosc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("verify", help="oscillator relation suites for one realization"))

    vp = sub.add_parser("virasoro", help="q-Virasoro relations and the q -> 1 probe")
    _add_common(vp)
    vp.add_argument("--window", type=int, help="check r, m in -1..WINDOW")
    vp.add_argument("--m", type=int, action="append", default=[], help="extra generator index")
    vp.add_argument("--classical-limit", action="store_true")

    qp = sub.add_parser("qcalc", help="evaluate a q-calculus scalar")
    qp.add_argument("op", choices=["qnum", "qfact", "exp", "jackson"])
    qp.add_argument("--N", type=int)
    qp.add_argument("--q-real", type=float)
    qp.add_argument("--x", type=float)
    qp.add_argument("--n", type=int)
    qp.add_argument("--moment", type=int)
    qp.add_argument("--truncation", type=int, default=qcalc.DEFAULT_TRUNCATION)

    sub.add_parser("report-schema", help="print the JSON schema of conformance reports")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    ns = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if ns.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        if ns.command == "report-schema":
            print(json.dumps(REPORT_SCHEMA, indent=2, sort_keys=True))
            return EXIT_OK
        if ns.command == "qcalc":
            if ns.op == "qnum" and ns.x is not None and not float(ns.x).is_integer():
                raise UsageError("--x must be an integer for qnum")
            print(cmd_qcalc(ns))
            return EXIT_OK
        cfg = build_config(ns)
        report = cmd_verify(cfg) if ns.command == "verify" else cmd_virasoro(cfg)
    except (UsageError, InvalidParameterError, UnsupportedModeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE

    text = report.to_json()
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    s = report.summary
    log.info("passed=%d failed=%d not_expected=%d", s["passed"], s["failed"], s["not_expected"])
    print(f"{cfg.subcommand}: {s['passed']} passed, {s['failed']} failed, {s['not_expected']} not expected",
          file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
