"""anticyc: JSON-emitting command line over the package.

Every subcommand produces a report ``{version, config, results, timing}``
where each result is ``{name, status, witness}``. Exit status is 0 when no
result has status "fail", 1 when some check failed and 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

import sympy

from . import __version__, catalog
from .arith import PadicInt, VElem, is_prime
from .classfield import GroupRingElement, SplitDecomposition, ray_class_group, ring_class_group
from .errors import AnticycError, InputError
from .euler import (EllipticCurve, FormData, P_poly, Q_element, inert_check, root_number, selmer_selector,
                    tame_sweep)
from .heckechar import HeckeCharacter, trivial_character
from .interp import (InterpFactor, Ramified, bd_prefactor, calE_BD, e_BDP, gamma_C, gamma_triple,
                     gamma_triple_comparison, in_katz_range, infinity_type_of_twists, katz_factor,
                     katz_fe_transform, triple_Ep_factorization_check, weight_substitution_check)
from .iqfield import IQField, Ideal, quadratic_field, reduced_forms
from .theta import (hecke_recursion_check, p_stabilize, phi_n_image, specialization_compare, theta_qexp)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


# ---------------------------------------------------------------------------
# run configuration

@dataclass
class RunConfig:
    disc: int | None = None
    p: int | None = None
    precision: int = 20
    B: int = 200
    L: int = 200
    characters: list = field(default_factory=list)
    form: dict = field(default_factory=dict)
    output: str | None = None
    seed: int = 0
    threads: int = 1

    def validate(self) -> None:
        for name in ("precision", "B", "L", "threads"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        if self.p is not None and (self.p % 2 == 0 or not is_prime(self.p)):
            raise InputError("p must be an odd prime")

    def to_json(self) -> dict:
        return asdict(self)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, data: dict | str) -> RunConfig:
        if isinstance(data, str):
            data = json.loads(data)
        unknown = set(data) - set(cls.__dataclass_fields__)
        if unknown:
            raise InputError(f"unknown config keys {sorted(unknown)}")
        cfg = cls(**data)
        cfg.validate()
        return cfg


def build_config(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Config file, then environment overrides, then explicit flags."""
    cfg = RunConfig()
    if getattr(args, "config", None):
        cfg = RunConfig.from_json(Path(args.config).read_text())
    if environ.get("ANTICYC_PRECISION"):
        cfg.precision = _env_int(environ, "ANTICYC_PRECISION")
    if environ.get("ANTICYC_THREADS"):
        cfg.threads = _env_int(environ, "ANTICYC_THREADS")
    for flag, attr in (("disc", "disc"), ("p", "p"), ("N", "precision"), ("B", "B"), ("L", "L"),
                       ("seed", "seed"), ("out", "output")):
        value = getattr(args, flag, None)
        if value is not None:
            setattr(cfg, attr, value)
    for flag in ("char", "char1", "char2", "char_file"):
        value = getattr(args, flag, None)
        if value is not None and value not in cfg.characters:
            cfg.characters.append(value)
    form = {k: getattr(args, k) for k in ("curve", "level", "form", "form_table") if getattr(args, k, None) is not None}
    if form:
        cfg.form = form
    cfg.validate()
    return cfg


def _env_int(environ, key: str) -> int:
    try:
        return int(environ[key])
    except ValueError as exc:
        raise InputError(f"{key} must be an integer") from exc


# ---------------------------------------------------------------------------
# argument parsing helpers

class JSONArgumentParser(argparse.ArgumentParser):
    """argparse that reports usage errors as a JSON diagnostic with exit status 2."""

    def error(self, message):
        diag = {"error": "usage", "message": message, "prog": self.prog}
        sys.stdout.write(json.dumps(diag, sort_keys=True) + "\n")
        raise SystemExit(EXIT_INPUT)


def parse_ideal(K: IQField, text: str) -> Ideal:
    """``n`` for (n), ``x,y`` for (x + y omega), ``a,b,c`` for the HNF lattice [a, b + c omega]."""
    try:
        parts = [int(t) for t in text.replace("(", "").replace(")", "").replace("[", "").replace("]", "").split(",")]
    except ValueError as exc:
        raise InputError(f"cannot read ideal {text!r}") from exc
    if len(parts) == 1:
        return K.ideal(parts[0])
    if len(parts) == 2:
        return K.ideal(tuple(parts))
    if len(parts) == 3:
        return K.ideal_hnf(*parts)
    raise InputError(f"an ideal needs 1, 2 or 3 integers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"expected comma-separated integers, got {text!r}") from exc


def _need_p(cfg) -> int:
    if cfg.p is None:
        raise InputError("--p is required")
    return cfg.p


def _field(args) -> IQField:
    if args.disc is None:
        raise InputError("--disc is required")
    return quadratic_field(args.disc)


def load_character(source: str | None, args=None) -> HeckeCharacter:
    """A catalog name, or a path to a character JSON file."""
    if source is None:
        raise InputError("a character is required (--char NAME or --char-file PATH)")
    if source.startswith("trivial:"):
        return trivial_character(quadratic_field(int(source.split(":", 1)[1])))
    path = Path(source)
    if path.suffix == ".json" or path.exists():
        try:
            return HeckeCharacter.from_json(path.read_text())
        except OSError as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
    return catalog.character(source)


def _primary_character(args) -> HeckeCharacter:
    return load_character(getattr(args, "char_file", None) or getattr(args, "char", None))


FORM_TABLE_SCHEMA = "anticyc.form-table/1"


def load_form(args) -> FormData:
    if getattr(args, "form", None):
        if args.form not in catalog.CURVES:
            raise InputError(f"unknown curve label {args.form!r}; known: {sorted(catalog.CURVES)}")
        return catalog.form(args.form)
    if getattr(args, "form_table", None):
        data = json.loads(Path(args.form_table).read_text())
        if data.get("schema", FORM_TABLE_SCHEMA) != FORM_TABLE_SCHEMA:
            raise InputError(f"unsupported form-table schema {data['schema']!r}, expected {FORM_TABLE_SCHEMA!r}")
        table = {int(k): int(v) for k, v in data["a"].items()}
        return FormData(int(data["weight"]), int(data["level"]), table=table)
    if getattr(args, "curve", None):
        if args.level is None:
            raise InputError("--curve needs --level")
        return FormData.from_curve(EllipticCurve.parse(args.curve), args.level)
    raise InputError("form data required: --form LABEL, --curve COEFFS --level N, or --form-table PATH")


def jsonable(x: Any):
    if isinstance(x, VElem):
        return [str(c) for c in x.c]
    if isinstance(x, PadicInt):
        return {"value": x.value, "p": x.p, "N": x.prec}
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (sympy.Basic,)):
        return str(x)
    if isinstance(x, (InterpFactor, Ramified, Ideal, GroupRingElement)):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return x.to_json()
    return x


def result(name: str, status: str, witness) -> dict:
    return {"name": name, "status": status, "witness": jsonable(witness)}


def _check(name: str, passed: bool, witness) -> dict:
    return result(name, "pass" if passed else "fail", witness)


# ---------------------------------------------------------------------------
# handlers: each returns a list of result dicts

def cmd_field_info(args, cfg):
    K = _field(args)
    split = {kind: [] for kind in ("split", "inert", "ramified")}
    for ell in range(2, args.L + 1 if args.L else 50):
        if is_prime(ell):
            split[K.splitting_type(ell)].append(ell)
    return [result("field-info", "ok", {"disc": K.disc, "units": K.w, "omega_trace_norm": [K.t, K.n],
                                        "class_number": K.class_number, "primes": split})]


def cmd_classgroup(args, cfg):
    K = _field(args)
    cl = K.class_group
    forms = [list(f) for f in reduced_forms(K.disc)]
    return [result("classgroup", "ok", {"disc": K.disc, "order": cl.order,
                                        "invariants": list(cl.group.invariants), "reduced_forms": forms})]


def cmd_rayclass(args, cfg):
    K = _field(args)
    modulus = parse_ideal(K, args.modulus)
    G = ray_class_group(K, modulus)
    rep = G.exactness_report()
    ok = rep["cardinality_identity"] and rep["kernel_matches"] and rep["surjective_to_H1"]
    return [_check("rayclass", ok, {**G.to_json(), "order": G.order, "exactness": rep})]


def cmd_ringclass(args, cfg):
    K = _field(args)
    R = ring_class_group(K, args.m)
    rep = R.exactness_report()
    ok = rep["cardinality_identity"] and rep["kernel_matches"] and R.order == R.formula_order()
    return [_check("ringclass", ok, {"m": args.m, "invariants": list(R.group.invariants), "order": R.order,
                                     "formula_order": R.formula_order(), "exactness": rep})]


def cmd_char_build(args, cfg):
    if args.type is not None:
        K = _field(args)
        if args.conductor is None or args.order is None:
            raise InputError("--conductor and --order are required with --type")
        psi = HeckeCharacter(K, parse_ideal(K, args.conductor), tuple(_int_list(args.type)), args.order,
                             _int_list(args.exponents or ""))
    else:
        psi = _primary_character(args)
    if args.save:
        Path(args.save).write_text(psi.dumps() + "\n")
    return [result("char-build", "ok", psi.to_json())]


def cmd_char_eval(args, cfg):
    psi = _primary_character(args)
    I = parse_ideal(psi.field, args.ideal)
    return [result("char-eval", "ok", {"ideal": I.to_json(), "value": psi.evaluate(I),
                                       "basis": "omega^a zeta^b at index 2b+a"})]


def cmd_char_avatar(args, cfg):
    psi = _primary_character(args)
    I = parse_ideal(psi.field, args.ideal)
    av = psi.padic_avatar(I, _need_p(cfg), cfg.precision)
    return [result("char-avatar", "ok", {"ideal": I.to_json(), "value": av.value,
                                         "log_gamma": av.gamma_exponent})]


def cmd_char_spade(args, cfg):
    psi = _primary_character(args)
    holds, reason = psi.condition_spade(_need_p(cfg))
    return [result("char-spade", "pass" if holds else "fail", {"p": cfg.p, "holds": holds, "reason": reason})]


def cmd_theta_qexp(args, cfg):
    q = theta_qexp(_primary_character(args), cfg.B)
    data = q.to_json()
    if args.qexp_out:
        Path(args.qexp_out).write_text(q.dumps() + "\n")
        data = {k: v for k, v in data.items() if k != "coefficients"}
        data["written_to"] = args.qexp_out
    return [result("theta-qexp", "ok", data)]


def cmd_theta_check(args, cfg):
    q = theta_qexp(_primary_character(args), cfg.B)
    rep = hecke_recursion_check(q)
    return [_check("theta-check", rep.passed, {"B": cfg.B, "level": q.level, "weight": q.weight, **rep.to_json()})]


def cmd_theta_phi_n(args, cfg):
    psi = _primary_character(args)
    modulus = parse_ideal(psi.field, args.modulus) if args.modulus else psi.conductor
    q = theta_qexp(psi, args.ell)
    image = phi_n_image(psi, modulus, args.ell, _need_p(cfg))
    aug = image.augmentation(q.ring.zero)
    return [_check("theta-phi-n", q.ring(aug) == q.ring(q.coefficients[args.ell]),
                   {"ell": args.ell, "image": image, "augmentation": q.ring(aug), "c_ell": q.coefficients[args.ell]})]


def cmd_theta_stabilize(args, cfg):
    q = theta_qexp(_primary_character(args), cfg.B)
    st = p_stabilize(q, _need_p(cfg), cfg.precision)
    return [_check("theta-stabilize", st.up_eigen_check(),
                   {"alpha": st.alpha, "beta": st.beta, "coefficients": st.coefficients[1:]})]


def cmd_theta_family(args, cfg):
    xi = load_character(getattr(args, "char_file", None) or args.char) if (args.char or args.char_file) \
        else trivial_character(quadratic_field(args.disc or -4), 4)
    rows = [specialization_compare(xi, cfg.p or 5, k, cfg.B, cfg.precision) for k in _int_list(args.k)]
    return [_check(f"family-compare-k{r.k}", r.passed, r.to_json()) for r in rows]


def _pair(args):
    psi1 = load_character(args.char1)
    psi2 = load_character(args.char2 or args.char1)
    return psi1, psi2


def _split_prime(K: IQField, args) -> Ideal:
    if args.prime:
        return parse_ideal(K, args.prime)
    if args.ell:
        return K.prime_ideals_above(args.ell)[0]
    raise InputError("--prime IDEAL or --ell is required")


def cmd_euler_P(args, cfg):
    fd = load_form(args)
    psi1, psi2 = _pair(args)
    prime = _split_prime(psi1.field, args)
    P = P_poly(fd, psi1, psi2, prime)
    return [result("euler-P", "ok", {"prime": prime.to_json(), "coefficients": P.coefficients})]


def cmd_euler_Q(args, cfg):
    fd = load_form(args)
    psi1, psi2 = _pair(args)
    dec = SplitDecomposition(psi1.field, args.m, _need_p(cfg))
    prime = _split_prime(psi1.field, args)
    return [result("euler-Q", "ok", {"prime": prime.to_json(), "Q": Q_element(fd, psi1, psi2, prime, dec)})]


def cmd_euler_tame(args, cfg):
    fd = load_form(args)
    psi1, psi2 = _pair(args)
    dec = SplitDecomposition(psi1.field, args.m, _need_p(cfg))
    reports = tame_sweep(fd, psi1, psi2, dec, cfg.L)
    return [_check(f"tame-{r.ell}-{'-'.join(map(str, r.prime))}", r.passed, r.to_json()) for r in reports]


def cmd_euler_inert(args, cfg):
    fd = load_form(args) if (args.form or args.curve or args.form_table) else None
    K = _field(args)
    psi1 = load_character(args.char1) if args.char1 else None
    psi2 = load_character(args.char2 or args.char1) if args.char1 else None
    bad = (fd.level if fd else 1) * abs(K.disc) * (psi1.conductor.norm * psi2.conductor.norm if psi1 else 1)
    out = []
    for ell in range(2, cfg.L + 1):
        if is_prime(ell) and bad % ell and K.splitting_type(ell) == "inert":
            rep = inert_check(fd, ell, K, psi1, psi2)
            out.append(_check(f"inert-{ell}", rep.passed and rep.twist_is_one is not False, rep.to_json()))
    return out


def cmd_root_number(args, cfg):
    return [result("root-number", "ok", root_number(args.nu, args.j, args.k))]


def cmd_selmer(args, cfg):
    return [result("selmer", "ok", selmer_selector(args.j, args.k))]


def _values(args) -> dict:
    out = {}
    for item in args.values or []:
        key, _, val = item.partition("=")
        if not _:
            raise InputError(f"expected name=value, got {item!r}")
        out[key] = val
    return out


def _factor_result(name: str, factor, args) -> list:
    witness = {"factor": factor}
    values = _values(args)
    if values and isinstance(factor, InterpFactor):
        witness["value"] = factor.evaluate(values)
    return [result(name, "ok", witness)]


def cmd_interp_gamma(args, cfg):
    if args.s is not None:
        return [result("gamma-C", "ok", gamma_C(args.s))]
    k = _int_list(args.weights)
    if len(k) != 3:
        raise InputError("--weights needs k0,k1,k2")
    witness = {"weights": k, "value": gamma_triple(*k)}
    if args.r is not None:
        witness["comparison"] = gamma_triple_comparison(k[0], k[2], args.r)
    return [result("gamma-triple", "ok", witness)]


def cmd_interp_bd(args, cfg):
    return _factor_result("calE-BD", calE_BD(n=args.n, symmetric=args.symmetric), args) + \
        _factor_result("BD-prefactor", bd_prefactor(n=args.n), args)


def cmd_interp_bdp(args, cfg):
    return _factor_result("e-BDP", e_BDP(n=args.n), args)


def cmd_interp_katz(args, cfg):
    out = _factor_result("katz", katz_factor(), args)
    if args.type:
        t = tuple(_int_list(args.type))
        fe = katz_fe_transform(t)
        out.append(result("katz-fe", "ok", {**fe, "in_range": in_katz_range(t),
                                            "image_in_range": in_katz_range(fe["infinity_type"])}))
    return out


def cmd_interp_ep(args, cfg):
    exps = tuple(_int_list(args.exponents)) if args.exponents else None
    ok = triple_Ep_factorization_check(swap_square=args.swap_square, exponents=exps)
    return [_check("ep-factor", ok, {"swap_square": args.swap_square, "exponents": exps})]


def cmd_interp_weights(args, cfg):
    rep = weight_substitution_check(_need_p(cfg), args.k1, args.k2, cfg.precision)
    return [_check("weight-substitution", rep["passed"], rep)]


def cmd_interp_types(args, cfg):
    t1, t2 = infinity_type_of_twists(args.k1, args.k2)
    return [result("twist-types", "ok", {"first": t1, "second": t2})]


def _suite_worker(job):
    from .suite import CRITERIA, run_criterion
    index, profile = job
    return run_criterion(CRITERIA[index], profile)


def cmd_suite(args, cfg):
    from .suite import CRITERIA, coverage_manifest
    only = set(_int_list(args.only)) if args.only else None
    jobs = [(i, args.profile) for i, c in enumerate(CRITERIA) if only is None or c.number in only]
    if cfg.threads > 1:
        with ProcessPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(_suite_worker, jobs))
    else:
        results = [_suite_worker(j) for j in jobs]
    out = []
    timing = {}
    for r in results:
        data = r.to_json()
        timing[data["name"]] = data["witness"].pop("seconds")
        out.append(data)
    manifest = result("coverage-manifest", "ok", {"profile": args.profile, "criteria": coverage_manifest()})
    args._suite_timing = timing
    return out + [manifest]


# ---------------------------------------------------------------------------

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="RunConfig JSON file")
    p.add_argument("--pretty", action="store_true", help="render a table instead of JSON")
    p.add_argument("--out", help="also write the JSON report to this path")
    p.add_argument("--timing", action="store_true", help="include wall-clock timings in the report")
    p.add_argument("--disc", type=int, help="field discriminant")
    p.add_argument("--p", type=int, help="odd prime p")
    p.add_argument("--N", type=int, help="p-adic precision")
    p.add_argument("--B", type=int, help="q-expansion bound")
    p.add_argument("--L", type=int, help="prime sweep bound")
    p.add_argument("--seed", type=int)


def _char_flags(p):
    p.add_argument("--char", help="catalog character name (see README)")
    p.add_argument("--char-file", help="character JSON file")


def _pair_flags(p):
    p.add_argument("--char1", required=False, help="first character (name or JSON path)")
    p.add_argument("--char2", help="second character, defaults to the first")


def _form_flags(p):
    p.add_argument("--form", help=f"curve label: {', '.join(sorted(catalog.CURVES))}")
    p.add_argument("--curve", help="a1,a2,a3,a4,a6")
    p.add_argument("--level", type=int)
    p.add_argument("--form-table", help="JSON {weight, level, a: {ell: a_ell}}")


def build_parser() -> argparse.ArgumentParser:
    parser = JSONArgumentParser(prog="anticyc", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="group", required=True, parser_class=JSONArgumentParser)

    def leaf(parent, name, handler, help_text):
        p = parent.add_parser(name, help=help_text)
        _common(p)
        p.set_defaults(handler=handler)
        return p

    fld = sub.add_parser("field", help="field data").add_subparsers(dest="cmd", required=True,
                                                                    parser_class=JSONArgumentParser)
    leaf(fld, "info", cmd_field_info, "discriminant, units, class number, splitting")
    leaf(sub, "classgroup", cmd_classgroup, "class group and reduced forms")
    leaf(sub, "rayclass", cmd_rayclass, "ray class group of a modulus").add_argument("--modulus", required=True)
    leaf(sub, "ringclass", cmd_ringclass, "ring class group of conductor m").add_argument("--m", type=int, required=True)

    ch = sub.add_parser("char", help="Hecke characters").add_subparsers(dest="cmd", required=True,
                                                                       parser_class=JSONArgumentParser)
    p = leaf(ch, "build", cmd_char_build, "build and serialise a character")
    _char_flags(p)
    p.add_argument("--conductor")
    p.add_argument("--type", help="infinity type a,b")
    p.add_argument("--order", type=int, help="order M of the finite part's values")
    p.add_argument("--exponents", help="exponents on the canonical unit generators")
    p.add_argument("--save", help="write the character JSON here")
    p = leaf(ch, "eval", cmd_char_eval, "exact value on an ideal")
    _char_flags(p)
    p.add_argument("--ideal", required=True)
    p = leaf(ch, "avatar", cmd_char_avatar, "p-adic avatar on an ideal")
    _char_flags(p)
    p.add_argument("--ideal", required=True)
    p = leaf(ch, "spade", cmd_char_spade, "local condition at the designated prime above p")
    _char_flags(p)

    th = sub.add_parser("theta", help="theta series").add_subparsers(dest="cmd", required=True,
                                                                    parser_class=JSONArgumentParser)
    p = leaf(th, "qexp", cmd_theta_qexp, "q-expansion up to B")
    _char_flags(p)
    p.add_argument("--qexp-out", help="write the full q-expansion JSON here")
    p = leaf(th, "check", cmd_theta_check, "Hecke recursion check")
    _char_flags(p)
    p = leaf(th, "phi-n", cmd_theta_phi_n, "group-ring image of T_ell'")
    _char_flags(p)
    p.add_argument("--modulus")
    p.add_argument("--ell", type=int, required=True)
    p = leaf(th, "stabilize", cmd_theta_stabilize, "ordinary p-stabilisation")
    _char_flags(p)
    p = leaf(th, "family-compare", cmd_theta_family, "CM family specialisations against stabilised theta series")
    _char_flags(p)
    p.add_argument("--k", default="2,3,4", help="weights, comma separated")

    eu = sub.add_parser("euler", help="Euler factors and norm relations").add_subparsers(
        dest="cmd", required=True, parser_class=JSONArgumentParser)
    for name, handler, text in (("P", cmd_euler_P, "Euler polynomial at a split prime"),
                                ("Q", cmd_euler_Q, "group-ring operator at a split prime"),
                                ("tame-check", cmd_euler_tame, "tame congruence over split primes up to L"),
                                ("inert-check", cmd_euler_inert, "inert congruence up to L")):
        p = leaf(eu, name, handler, text)
        _form_flags(p)
        _pair_flags(p)
        if name in ("P", "Q"):
            p.add_argument("--prime")
            p.add_argument("--ell", type=int)
        if name in ("Q", "tame-check"):
            p.add_argument("--m", type=int, default=1)
    p = leaf(eu, "root-number", cmd_root_number, "signs of the functional equations")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p = leaf(eu, "selmer", cmd_selmer, "Selmer condition matching Bloch-Kato")
    p.add_argument("--j", type=int, required=True)
    p.add_argument("--k", type=int, required=True)

    ip = sub.add_parser("interp", help="interpolation factors").add_subparsers(
        dest="cmd", required=True, parser_class=JSONArgumentParser)
    p = leaf(ip, "gamma", cmd_interp_gamma, "Gamma_C values and the triple Gamma factor")
    p.add_argument("--s", type=int)
    p.add_argument("--weights", default="2,1,1")
    p.add_argument("--r", type=int, help="also compare with the explicit list for f of weight 2r")
    for name, handler in (("bd", cmd_interp_bd), ("bdp", cmd_interp_bdp), ("katz", cmd_interp_katz)):
        p = leaf(ip, name, handler, f"{name} factor, optionally evaluated")
        p.add_argument("--values", nargs="*", help="name=value substitutions")
        if name != "katz":
            p.add_argument("--n", type=int, default=0)
        else:
            p.add_argument("--type", help="infinity type k,j for the functional-equation map")
        if name == "bd":
            p.add_argument("--symmetric", action="store_true")
    p = leaf(ip, "ep-factor", cmd_interp_ep, "triple Euler factor factorisation")
    p.add_argument("--swap-square", action="store_true")
    p.add_argument("--exponents", help="e_lin,e_sq,e_p override")
    p = leaf(ip, "weights", cmd_interp_weights, "weight-variable substitution")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)
    p = leaf(ip, "types", cmd_interp_types, "infinity types of the two twists")
    p.add_argument("--k1", type=int, required=True)
    p.add_argument("--k2", type=int, required=True)

    p = leaf(sub, "suite", cmd_suite, "run the acceptance matrix")
    p.add_argument("--profile", choices=["quick", "full"], default="quick")
    p.add_argument("--only", help="criterion numbers, comma separated")
    return parser


def render_pretty(report: dict) -> str:
    lines = [f"anticyc {report['version']}"]
    width = max((len(r["name"]) for r in report["results"]), default=4)
    for r in report["results"]:
        w = json.dumps(r["witness"], sort_keys=True)
        if len(w) > 100:
            w = w[:97] + "..."
        lines.append(f"{r['name']:<{width}}  {r['status']:<4}  {w}")
    if report.get("timing"):
        lines.append("timing: " + json.dumps(report["timing"], sort_keys=True))
    return "\n".join(lines)


def run(argv: Sequence[str] | None = None, environ=os.environ) -> tuple[int, dict, bool]:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    cfg = build_config(args, environ)
    args.disc = cfg.disc  # a config file may supply the field
    results = args.handler(args, cfg)
    elapsed = time.perf_counter() - start
    timing = None
    if args.timing:
        timing = {"total_seconds": round(elapsed, 3)}
        timing.update(getattr(args, "_suite_timing", {}))
    report = {"version": __version__, "config": cfg.to_json(), "results": results, "timing": timing}
    failed = any(r["status"] == "fail" for r in results)
    return (EXIT_FAIL if failed else EXIT_OK), report, args.pretty


def main(argv: Sequence[str] | None = None) -> int:
    try:
        code, report, pretty = run(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except AnticycError as exc:
        sys.stdout.write(json.dumps(exc.to_json(), sort_keys=True) + "\n")
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, KeyError) as exc:
        sys.stdout.write(json.dumps({"error": "input_error", "message": str(exc)}, sort_keys=True) + "\n")
        return EXIT_INPUT
    text = json.dumps(report, sort_keys=True)
    if report["config"].get("output"):
        Path(report["config"]["output"]).write_text(text + "\n")
    sys.stdout.write((render_pretty(report) if pretty else text) + "\n")
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
