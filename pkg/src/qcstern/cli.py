"""Command-line front end: ``qcstern keygen|sign|verify|params|bench|identify|replay``.

Exit status: 0 accept / success, 1 reject, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import sys
import threading
import time

from . import fileformat
from .fiatshamir import expected_signature_bits, sign, verify_signature
from .params import (OPTIMIZATIONS, ParameterError, builtin_parameter_sets, get_parameter_set,
                     public_key_bytes, select_parameters)
from .protocol.core import keygen
from . import wire

EXIT_ACCEPT, EXIT_REJECT, EXIT_USAGE = 0, 1, 2

OPT_NAMES = {name.replace("_", "-"): name for name in OPTIMIZATIONS}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _read(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError("cannot read %s: %s" % (path, exc.strerror or exc)) from None


def _write(path: str, data: bytes):
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise UsageError("cannot write %s: %s" % (path, exc.strerror or exc)) from None


def _seed(text: str | None, size: int) -> bytes:
    if text is None:
        return os.urandom(size)
    try:
        raw = bytes.fromhex(text)
    except ValueError:
        raise UsageError("--seed must be hex") from None
    if len(raw) < size:
        raise UsageError("--seed needs at least %d bytes of hex" % size)
    return raw


def _params(args):
    try:
        params = get_parameter_set(args.paramset)
    except ParameterError as exc:
        raise UsageError(str(exc)) from None
    return _apply_no_opt(params, args)


def _apply_no_opt(params, args):
    names = getattr(args, "no_opt", None) or []
    if not names:
        return params
    try:
        return params.with_options(**{OPT_NAMES[n]: False for n in names})
    except ParameterError as exc:
        raise UsageError(str(exc)) from None


def _endpoint(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not port.isdigit():
        raise UsageError("endpoint must be HOST:PORT, got %r" % text)
    return host or "127.0.0.1", int(port)


def _load(loader, path):
    try:
        return loader(_read(path))
    except fileformat.FormatError as exc:
        raise UsageError("%s: %s" % (path, exc)) from None


# ---- commands ----

def cmd_keygen(args) -> int:
    params = _params(args)
    sk, pk = keygen(params, _seed(args.seed, params.seed_bytes))
    sk_path, pk_path = args.out + ".sk", args.out + ".pk"
    _write(sk_path, fileformat.dump_secret_key(sk, params))
    _write(pk_path, fileformat.dump_public_key(pk, params))
    print("%s: secret key %s (%d B payload), public key %s (%d B payload)"
          % (params.name, sk_path, len(sk.to_bytes()), pk_path, len(pk.to_bytes())))
    print("public key size: %d B storing k-bit syndromes, %d B charging n bits per syndrome"
          % (public_key_bytes(params, "k-bit"), public_key_bytes(params, "n-bit")))
    return EXIT_ACCEPT


def _keypair(args):
    params, sk = _load(fileformat.load_secret_key, args.sk)
    pk_params, pk = _load(fileformat.load_public_key, args.pk)
    if pk_params.k != params.k or pk_params.s != params.s or pk_params.delta != params.delta:
        raise UsageError("secret and public keys belong to different parameter sets")
    return params, sk, pk


def cmd_sign(args) -> int:
    params, sk, pk = _keypair(args)
    params = _apply_no_opt(params, args)
    message = _read(args.message)
    sig = sign(sk, pk, params, message, _seed(args.seed, params.seed_bytes))
    _write(args.out, fileformat.dump_signature(sig, params))
    print("signature %s: %d B payload (%s)" % (args.out, len(sig), params.name))
    return EXIT_ACCEPT


def cmd_verify(args) -> int:
    pk_params, pk = _load(fileformat.load_public_key, args.pk)
    message = _read(args.message)
    try:
        params, sig = fileformat.load_signature(_read(args.signature))
    except fileformat.FormatError as exc:
        print("reject: %s" % exc, file=sys.stderr)
        return EXIT_REJECT
    if (params.k, params.s, params.delta) != (pk_params.k, pk_params.s, pk_params.delta):
        print("reject: signature is for %s, key is for %s" % (params.name, pk_params.name),
              file=sys.stderr)
        return EXIT_REJECT
    if verify_signature(pk, params, message, sig):
        print("accept")
        return EXIT_ACCEPT
    print("reject", file=sys.stderr)
    return EXIT_REJECT


def cmd_params(args) -> int:
    sets = builtin_parameter_sets() if args.paramset is None else [_params(args)]
    docs = []
    for p in sets:
        try:
            report = select_parameters(p.lam, p.n, p.k, p.w, p.s)
            fields = report.as_dict()
            text = report.format()
        except ParameterError as exc:
            fields = {"security": "n/a"}
            text = "security  n/a (%s)" % exc
        doc = {"name": p.name, "delta": p.delta, **fields,
               "sk_bytes": p.seed_bytes,
               "pk_bytes_kbit": public_key_bytes(p, "k-bit"),
               "pk_bytes_nbit": public_key_bytes(p, "n-bit"),
               "sig_bytes_formula": expected_signature_bits(p).formula / 8,
               "sig_bytes_exact": expected_signature_bits(p).exact / 8}
        docs.append(doc)
        if args.format == "text":
            print("[%s]" % p.name)
            print(text)
            extra = [(k, doc[k]) for k in ("delta", "sk_bytes", "pk_bytes_kbit", "pk_bytes_nbit",
                                           "sig_bytes_formula", "sig_bytes_exact")]
            width = max(len(f) for f in fields) if len(fields) > 1 else len("sig_bytes_formula")
            for key, value in extra:
                print("%-*s  %s" % (width, key, "%.1f" % value if isinstance(value, float) else value))
            print()
        elif args.format == "kv":
            for key, value in doc.items():
                print("%s.%s=%s" % (p.name, key, value))
    if args.format == "json":
        print(json.dumps(docs, indent=2))
    return EXIT_ACCEPT


def cmd_bench(args) -> int:
    params = _params(args)
    if args.iterations < 1:
        raise UsageError("--iterations must be at least 1")
    sk, pk = keygen(params, _seed(args.seed, params.seed_bytes))
    sizes, t_sign, t_verify = [], [], []
    failures = 0
    for i in range(args.iterations):
        message = i.to_bytes(4, "big")
        t0 = time.perf_counter()
        sig = sign(sk, pk, params, message, os.urandom(params.seed_bytes))
        t1 = time.perf_counter()
        failures += not verify_signature(pk, params, message, sig)
        t2 = time.perf_counter()
        sizes.append(len(sig))
        t_sign.append(t1 - t0)
        t_verify.append(t2 - t1)
    est = expected_signature_bits(params)
    mean = statistics.fmean(sizes)
    print("parameter set       %s%s" % (params.name,
                                        " (disabled: %s)" % ", ".join(params.disabled()) if params.disabled() else ""))
    print("iterations          %d" % args.iterations)
    print("signature bytes     mean %.1f  min %d  max %d" % (mean, min(sizes), max(sizes)))
    print("formula bytes       %.1f  (%+.2f%%)" % (est.formula / 8, 100 * (mean / (est.formula / 8) - 1)))
    print("exact mean bytes    %.1f  (%+.2f%%)" % (est.exact / 8, 100 * (mean / (est.exact / 8) - 1)))
    print("sign time           %.2f ms" % (1e3 * statistics.fmean(t_sign)))
    print("verify time         %.2f ms" % (1e3 * statistics.fmean(t_verify)))
    print("verify failures     %d" % failures)
    return EXIT_ACCEPT if failures == 0 else EXIT_REJECT


def cmd_identify(args) -> int:
    if args.role == "prover":
        if not args.connect or not args.sk:
            raise UsageError("the prover needs --connect and --sk")
        params, sk, pk = _keypair(args)
        try:
            channel = wire.connect(_endpoint(args.connect), args.timeout)
            accepted = wire.prover_session(channel, sk, pk, params,
                                           _seed(args.seed, params.seed_bytes) if args.seed else None)
        except wire.FrameError as exc:
            print("error: %s" % exc, file=sys.stderr)
            return EXIT_REJECT
        print("accepted" if accepted else "rejected")
        return EXIT_ACCEPT if accepted else EXIT_REJECT

    if not args.listen:
        raise UsageError("the verifier needs --listen")
    params, pk = _load(fileformat.load_public_key, args.pk)
    outcomes = []
    lock = threading.Lock()

    def done(record):
        t = record.transcript
        status = "accepted" if record.accepted else "rejected (%s)" % (t.error or "bad response")
        with lock:
            n = len(outcomes)
            print("session %d from %s:%d %s" % (n, *record.peer[:2], status), flush=True)
            if args.transcript_log:
                stem, ext = os.path.splitext(args.transcript_log)
                path = args.transcript_log if args.sessions == 1 else "%s.%d%s" % (stem, n, ext)
                try:
                    _write(path, t.to_json().encode())
                except UsageError as exc:
                    print("warning: %s" % exc, file=sys.stderr)
            outcomes.append(record.accepted)

    try:
        server = wire.VerifierServer(_endpoint(args.listen), pk, params, args.timeout, on_session=done)
    except OSError as exc:
        raise UsageError("cannot listen on %s: %s" % (args.listen, exc)) from None
    with server:
        host, port = server.server_address[:2]
        print("listening on %s:%d" % (host, port), flush=True)
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            while args.sessions == 0 or len(outcomes) < args.sessions:
                time.sleep(0.02)
        except KeyboardInterrupt:
            pass
        server.shutdown()
    return EXIT_ACCEPT if outcomes and all(outcomes) else EXIT_REJECT


def cmd_replay(args) -> int:
    try:
        t = wire.SessionTranscript.from_json(_read(args.log).decode("utf-8", "replace"))
    except wire.FrameError as exc:
        raise UsageError(str(exc)) from None
    accepted = t.replay()
    if t.accepted is not None and t.accepted != accepted:
        print("warning: logged verdict was %s" % ("accept" if t.accepted else "reject"), file=sys.stderr)
    print("accept" if accepted else "reject")
    return EXIT_ACCEPT if accepted else EXIT_REJECT


# ---- argument parsing ----

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qcstern", description="Quasi-cyclic Stern signatures and identification.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def paramset(p, default="QCS-128-s1"):
        p.add_argument("--paramset", default=default,
                       help="TOY, QCS-128-s1, QCS-128-s4 or QCS-128-s20 (default %(default)s)")

    def no_opt(p):
        p.add_argument("--no-opt", action="append", choices=sorted(OPT_NAMES), metavar="NAME",
                       help="disable an optimization (repeatable): %s" % ", ".join(sorted(OPT_NAMES)))

    p = sub.add_parser("keygen", help="generate a key pair")
    paramset(p)
    no_opt(p)
    p.add_argument("--out", required=True, help="path prefix; writes PREFIX.sk and PREFIX.pk")
    p.add_argument("--seed", help="hex root seed for reproducible keys")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("sign", help="sign a message file")
    p.add_argument("--sk", required=True)
    p.add_argument("--pk", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--seed", help="hex signing randomness for reproducible signatures")
    no_opt(p)
    p.add_argument("message", help="message file, or - for stdin")
    p.set_defaults(func=cmd_sign)

    p = sub.add_parser("verify", help="verify a signature; exit 0 on accept, 1 on reject")
    p.add_argument("--pk", required=True)
    p.add_argument("message")
    p.add_argument("signature")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("params", help="security report for the built-in parameter sets")
    p.add_argument("--paramset", default=None, help="one set only (default: all)")
    p.add_argument("--format", choices=("text", "kv", "json"), default="text")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("bench", help="measure signature sizes and timings")
    paramset(p)
    no_opt(p)
    p.add_argument("--iterations", type=int, default=20)
    p.add_argument("--seed", help="hex key seed")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("identify", help="run the interactive protocol over TCP")
    p.add_argument("--role", choices=("prover", "verifier"), required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--listen", metavar="HOST:PORT", help="verifier endpoint (port 0 picks one)")
    group.add_argument("--connect", metavar="HOST:PORT", help="verifier to authenticate to")
    p.add_argument("--pk", required=True)
    p.add_argument("--sk", help="secret key (prover only)")
    p.add_argument("--seed", help="hex prover randomness")
    p.add_argument("--timeout", type=float, default=wire.DEFAULT_TIMEOUT, help="seconds per frame")
    p.add_argument("--sessions", type=int, default=1, help="verifier: sessions to serve, 0 = forever")
    p.add_argument("--transcript-log", help="verifier: write each session transcript as JSON")
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("replay", help="re-verify a logged interactive transcript")
    p.add_argument("log")
    p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print("qcstern: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
