"""Lossless JSON archives for built instances, plus re-verification.

Numbers: rationals serialize as "num/den" strings; integers stay JSON
numbers while they fit a double exactly and become decimal strings beyond
that. The content hash covers everything except provenance, so archives
rebuilt from the same config and seed hash identically even when written
at different times.
"""

import hashlib
import json
from dataclasses import asdict

from . import __version__, constructions as C
from .arith import PrimeSet, format_rational, parse_rational
from .errors import ConfigError, VerificationError
from .multiples import is_primitive
from .toeplitz import certify_position, level_report

FORMAT = "bfreekit-archive"
VERSION = 1
_INT_SAFE = 2**53


def _enc_int(x):
    return x if abs(x) < _INT_SAFE else str(x)


def _dec_int(x):
    return int(x)


def _enc_frac(q):
    return format_rational(q) if q is not None else None


def _dec_frac(s):
    return parse_rational(s) if s is not None else None


def canonical_json(obj):
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def content_hash(kind, recipe, payload, certificates):
    body = canonical_json(
        {"kind": kind, "recipe": recipe, "payload": payload, "certs": certificates}
    )
    return hashlib.sha256(body.encode()).hexdigest()


def _cert_to_json(c):
    d = asdict(c)
    return d


def _cert_from_json(d):
    return C.ConditionCert(**d)


# ---------------------------------------------------------------------------
# recipes <-> config dicts

_TOWER_KEYS = {"kind", "depth", "deltas", "betas", "prime_cap", "future_floor"}
_BES_KEYS = {
    "kind", "eps", "eps_schedule", "depth", "t_search_cap", "window_cap",
    "scan_cap", "exact_max_T", "estimate_window", "future_floor",
}
_SEED_KEYS = {
    "kind", "eps", "gamma", "kappa", "block_n", "mode", "depth", "eps_schedule",
    "seed", "word_attempts", "cover_budget", "cover_prime_cap",
    "cover_core_closed", "spread_scan", "t_search_cap", "window_cap",
    "scan_cap", "exact_max_T", "estimate_window", "future_floor",
}


def recipe_from_config(cfg):
    """Parse a config dict into (kind, recipe); unknown keys are rejected."""
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("config must be an object with a 'kind' key")
    kind = cfg["kind"]
    try:
        if kind == "prime_tower":
            _reject_unknown(cfg, _TOWER_KEYS)
            return kind, C.PrimeTowerRecipe(
                depth=int(cfg["depth"]),
                deltas=_frac_list(cfg.get("deltas")),
                betas=_int_list(cfg.get("betas")),
                prime_cap=cfg.get("prime_cap"),
                future_floor=int(cfg.get("future_floor", 10**6)),
            )
        if kind == "besicovitch":
            _reject_unknown(cfg, _BES_KEYS)
            kwargs = _common_caps(cfg)
            return kind, C.BesicovitchRecipe(
                eps=parse_rational(str(cfg["eps"])),
                eps_schedule=_frac_list(cfg["eps_schedule"]),
                depth=int(cfg["depth"]),
                **kwargs,
            )
        if kind == "entropy_seeded":
            _reject_unknown(cfg, _SEED_KEYS)
            if "seed" not in cfg:
                raise ConfigError("entropy_seeded configs must carry a seed")
            kwargs = _common_caps(cfg)
            for key in ("word_attempts", "cover_budget", "cover_prime_cap",
                        "spread_scan"):
                if key in cfg:
                    kwargs[key] = int(cfg[key])
            if "cover_core_closed" in cfg:
                kwargs["cover_core_closed"] = bool(cfg["cover_core_closed"])
            return kind, C.EntropySeededRecipe(
                eps=parse_rational(str(cfg["eps"])),
                gamma=parse_rational(str(cfg["gamma"])),
                kappa=parse_rational(str(cfg["kappa"])),
                block_n=int(cfg["block_n"]),
                mode=cfg["mode"],
                depth=int(cfg["depth"]),
                eps_schedule=_frac_list(cfg["eps_schedule"]),
                seed=int(cfg["seed"]),
                **kwargs,
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("bad config: %s" % exc) from exc
    raise ConfigError("unknown construction kind %r" % kind)


def _reject_unknown(cfg, allowed):
    extra = set(cfg) - allowed
    if extra:
        raise ConfigError("unknown config keys: %s" % sorted(extra))


def _common_caps(cfg):
    kwargs = {}
    for key in ("t_search_cap", "window_cap", "scan_cap", "exact_max_T",
                "estimate_window", "future_floor"):
        if key in cfg:
            kwargs[key] = int(cfg[key])
    return kwargs


def _frac_list(xs):
    if xs is None:
        return None
    return tuple(parse_rational(str(x)) for x in xs)


def _int_list(xs):
    if xs is None:
        return None
    return tuple(int(x) for x in xs)


def recipe_to_config(kind, recipe):
    if kind == "prime_tower":
        return {
            "kind": kind,
            "depth": recipe.depth,
            "deltas": [_enc_frac(d) for d in recipe.deltas] if recipe.deltas else None,
            "betas": list(recipe.betas) if recipe.betas else None,
            "prime_cap": recipe.prime_cap,
            "future_floor": recipe.future_floor,
        }
    if kind == "besicovitch":
        return {
            "kind": kind,
            "eps": _enc_frac(recipe.eps),
            "eps_schedule": [_enc_frac(e) for e in recipe.eps_schedule],
            "depth": recipe.depth,
            "t_search_cap": recipe.t_search_cap,
            "window_cap": recipe.window_cap,
            "scan_cap": recipe.scan_cap,
            "exact_max_T": recipe.exact_max_T,
            "estimate_window": recipe.estimate_window,
            "future_floor": recipe.future_floor,
        }
    if kind == "entropy_seeded":
        return {
            "kind": kind,
            "eps": _enc_frac(recipe.eps),
            "gamma": _enc_frac(recipe.gamma),
            "kappa": _enc_frac(recipe.kappa),
            "block_n": recipe.block_n,
            "mode": recipe.mode,
            "depth": recipe.depth,
            "eps_schedule": [_enc_frac(e) for e in recipe.eps_schedule],
            "seed": recipe.seed,
            "word_attempts": recipe.word_attempts,
            "cover_budget": recipe.cover_budget,
            "cover_prime_cap": recipe.cover_prime_cap,
            "cover_core_closed": recipe.cover_core_closed,
            "spread_scan": recipe.spread_scan,
            "t_search_cap": recipe.t_search_cap,
            "window_cap": recipe.window_cap,
            "scan_cap": recipe.scan_cap,
            "exact_max_T": recipe.exact_max_T,
            "estimate_window": recipe.estimate_window,
            "future_floor": recipe.future_floor,
        }
    raise ConfigError("unknown construction kind %r" % kind)


# ---------------------------------------------------------------------------
# instance payloads


def _settling_json(s):
    return {
        "T": s.T,
        "length": s.length,
        "density": _enc_frac(s.density),
        "vacuous": s.vacuous,
        "window_cap": s.window_cap,
        "scan_cap": s.scan_cap,
    }


def _tagged_json(e):
    return {"value": _enc_frac(e.value), "exact": e.exact, "window": e.window}


def _primeset_json(ps):
    return {
        "intervals": [list(iv) for iv in ps.intervals],
        "extras": [_enc_int(e) for e in ps.extras],
    }


def _primeset_from_json(d):
    return PrimeSet(
        intervals=tuple(tuple(iv) for iv in d["intervals"]),
        extras=tuple(_dec_int(e) for e in d["extras"]),
    )


def instance_payload(kind, inst):
    if kind == "prime_tower":
        return {
            "blocks": [[_enc_int(p) for p in blk] for blk in inst.blocks],
            "products": [_enc_int(q) for q in inst.products],
            "sizes": list(inst.sizes),
            "generators": [_enc_int(b) for b in inst.generators],
            "lcms": [_enc_int(x) for x in inst.lcms],
            "future_floor": _enc_int(inst.future_floor),
            "tail_reciprocal_bound": _enc_frac(inst.tail_reciprocal_bound),
            "primitive_prefix": inst.primitive_prefix,
        }
    if kind == "besicovitch":
        return {
            "starts": list(inst.starts),
            "settling": [_settling_json(s) for s in inst.settling],
            "e_table": [_tagged_json(e) for e in inst.e_table],
            "g_prefix": list(inst.g_prefix),
            "future_floor": _enc_int(inst.future_floor),
            "chain": {
                "head": inst.chain.head,
                "measured": _enc_frac(inst.chain.measured),
                "per_level": [
                    [T, c, _enc_frac(b)] for T, c, b in inst.chain.per_level
                ],
                "sum_counts": inst.chain.sum_counts,
                "sum_density_bound": _enc_frac(inst.chain.sum_density_bound),
                "sum_schedule_bound": _enc_frac(inst.chain.sum_schedule_bound),
                "eps": _enc_frac(inst.chain.eps),
                "count_le_density_bound": inst.chain.count_le_density_bound,
                "density_le_schedule": inst.chain.density_le_schedule,
                "schedule_lt_eps": inst.chain.schedule_lt_eps,
            },
        }
    if kind == "entropy_seeded":
        return {
            "levels": [
                {
                    "k": lev.k,
                    "T": lev.T,
                    "L": lev.L,
                    "settling": _settling_json(lev.settling),
                    "e": _tagged_json(lev.e_entry),
                    "word01": lev.word.to01(),
                    "word_cert": {
                        "word01": lev.word_cert.word01,
                        "gamma": _enc_frac(lev.word_cert.gamma),
                        "eps": _enc_frac(lev.word_cert.eps),
                        "kappa": _enc_frac(lev.word_cert.kappa),
                        "n": lev.word_cert.n,
                        "weight": lev.word_cert.weight,
                        "h_value": lev.word_cert.h_value,
                        "threshold": lev.word_cert.threshold,
                        "pass_ok": lev.word_cert.pass_ok,
                        "seed": lev.word_cert.seed,
                        "attempts": lev.word_cert.attempts,
                    },
                    "sites": list(lev.sites),
                    "generators": list(lev.generators),
                    "new_elements": list(lev.new_elements),
                }
                for lev in inst.levels
            ],
            "covers": {
                str(j): _primeset_json(ps) for j, ps in sorted(inst.covers.items())
            },
            "cover_certs": [_cert_to_json(c) for c in inst.cover_certs],
            "spread_certs": [_cert_to_json(c) for c in inst.spread_certs],
            "prefix": list(inst.prefix),
            "future_floor": _enc_int(inst.future_floor),
        }
    raise ConfigError("unknown construction kind %r" % kind)


def build_from_recipe(kind, recipe):
    if kind == "prime_tower":
        return C.build_prime_tower(recipe)
    if kind == "besicovitch":
        return C.build_besicovitch(recipe)
    if kind == "entropy_seeded":
        return C.build_entropy_seeded(recipe)
    raise ConfigError("unknown construction kind %r" % kind)


def make_archive(kind, inst, created=""):
    recipe_cfg = recipe_to_config(kind, inst.recipe)
    payload = instance_payload(kind, inst)
    certs = [_cert_to_json(c) for c in inst.certificates]
    return {
        "format": FORMAT,
        "version": VERSION,
        "kind": kind,
        "recipe": recipe_cfg,
        "payload": payload,
        "certificates": certs,
        "content_hash": content_hash(kind, recipe_cfg, payload, certs),
        "provenance": {
            "tool": "bfreekit %s" % __version__,
            "created": created,
            "config_sha256": hashlib.sha256(
                canonical_json(recipe_cfg).encode()
            ).hexdigest(),
        },
    }


def save_archive(arc, path):
    with open(path, "w") as fh:
        json.dump(arc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_archive(path):
    try:
        with open(path) as fh:
            arc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise VerificationError("unreadable archive: %s" % exc) from exc
    if not isinstance(arc, dict) or arc.get("format") != FORMAT:
        raise VerificationError("not a %s file" % FORMAT)
    if arc.get("version") != VERSION:
        raise VerificationError(
            "archive version %r not supported (this tool reads version %d); "
            "refusing rather than migrating" % (arc.get("version"), VERSION)
        )
    return arc


def verify_archive(arc):
    """Re-derive everything from the stored recipe and compare field by field.

    Raises VerificationError naming the first mismatch. Also re-runs the
    structural identity suite on the rebuilt instance, so a tampered recipe
    that still rebuilds cannot smuggle in a broken certificate.
    """
    kind = arc.get("kind")
    stored_hash = arc.get("content_hash")
    recompute = content_hash(
        kind, arc.get("recipe"), arc.get("payload"), arc.get("certificates")
    )
    if stored_hash != recompute:
        raise VerificationError("content hash mismatch")
    try:
        _, recipe = recipe_from_config(dict(arc["recipe"]))
        inst = build_from_recipe(kind, recipe)
    except VerificationError:
        raise
    except Exception as exc:
        # a recipe that no longer rebuilds is a broken archive, not a crash
        raise VerificationError("stored recipe does not rebuild: %s" % exc) from exc
    fresh_payload = instance_payload(kind, inst)
    _deep_compare("payload", arc["payload"], fresh_payload)
    fresh_certs = [_cert_to_json(c) for c in inst.certificates]
    _deep_compare("certificates", arc["certificates"], fresh_certs)
    _identity_suite(kind, inst)
    return inst


def _deep_compare(path, stored, fresh):
    if isinstance(stored, dict) and isinstance(fresh, dict):
        if set(stored) != set(fresh):
            raise VerificationError(
                "%s: key sets differ (%s vs %s)"
                % (path, sorted(stored), sorted(fresh))
            )
        for key in stored:
            _deep_compare("%s.%s" % (path, key), stored[key], fresh[key])
        return
    if isinstance(stored, list) and isinstance(fresh, list):
        if len(stored) != len(fresh):
            raise VerificationError("%s: list lengths differ" % path)
        for i, (a, b) in enumerate(zip(stored, fresh)):
            _deep_compare("%s[%d]" % (path, i), a, b)
        return
    if stored != fresh:
        raise VerificationError("%s: %r != %r" % (path, stored, fresh))


def _identity_suite(kind, inst):
    if kind == "prime_tower":
        import random

        for k in range(1, inst.depth + 1):
            lev = inst.level_data(k)  # asserts the gcd/product agreement
            report = level_report(lev)
            total = report.d_zero + report.d_one + report.d_undecided
            if total != 1:
                raise VerificationError("certificate class densities sum to %s" % total)
        desc = inst.descriptor()
        rng = random.Random(12345)
        lev = inst.level_data(inst.depth)
        for _ in range(200):
            n = rng.randrange(-lev.ell * 3, lev.ell * 3)
            cert = certify_position(lev, n)
            if cert.basis == "undecided":
                continue
            j = rng.randrange(-(desc.horizon // lev.ell), desc.horizon // lev.ell)
            pos = n + j * lev.ell
            if abs(pos) > desc.horizon:
                continue
            member = pos == 0 or any(pos % b == 0 for b in desc.prefix)
            if (0 if member else 1) != cert.value:
                raise VerificationError(
                    "period certificate violated at n=%d, j=%d" % (n, j)
                )
    elif kind == "besicovitch":
        if not is_primitive(inst.g_prefix):
            raise VerificationError("interval-union prefix not primitive")
        if C._interval_union_prefix(inst.starts) != inst.g_prefix:
            raise VerificationError("interval-union prefix mismatch")
    elif kind == "entropy_seeded":
        for lev in inst.levels:
            if not lev.word_cert.revalidate():
                raise VerificationError("word certificate failed at level %d" % lev.k)
            C.window_word_identity_check(inst, lev.k)
        for name, ok, detail in C.structure_checks(inst):
            if not ok:
                raise VerificationError("structure check %s failed: %s" % (name, detail))
    else:
        raise VerificationError("unknown kind %r" % kind)
