"""Compare the compiled tokenizer kernels against the pure-Python fallback.

Usage: python3 benchmarks/bench_kernels.py [--number N] [--repeat R]

Times raw tokenization over a mixed formula corpus and a full
parse_all over a synthetic 10k-formula sheet, once per backend.
"""

from __future__ import annotations

import argparse
import json
import random
import statistics
import time

from gridaudit import _kernels as kernels
from gridaudit.formula import parse_all
from gridaudit.grid import CellAddr, load_workbook

CORPUS_SEED = 7


def formula_corpus(n: int = 2000) -> list[str]:
    rng = random.Random(CORPUS_SEED)
    ops = ["+", "-", "*", "/", "&", "<", ">="]
    out = []
    for _ in range(n):
        terms = []
        for _ in range(rng.randint(2, 6)):
            roll = rng.random()
            if roll < 0.4:
                row, col = rng.randint(1, 500), rng.randint(1, 60)
                dollar = "$" if rng.random() < 0.2 else ""
                terms.append(f"{dollar}{CellAddr(1, col).a1()[:-1]}{row}")
            elif roll < 0.6:
                terms.append(str(rng.randint(0, 10000)))
            elif roll < 0.8:
                a = CellAddr(rng.randint(1, 99), rng.randint(1, 26)).a1()
                b = CellAddr(rng.randint(1, 99), rng.randint(1, 26)).a1()
                terms.append(f"SUM({a}:{b})")
            else:
                terms.append(f'"t{rng.randint(0, 99)}"')
        text = terms[0]
        for term in terms[1:]:
            text += rng.choice(ops) + term
        out.append("=" + text)
    return out


def big_sheet():
    cells = {}
    cols = [CellAddr(1, c).a1()[:-1] for c in range(2, 22)]
    for r in range(1, 501):
        cells[f"A{r}"] = str(r)
        prev = "A"
        for c in cols:
            cells[f"{c}{r}"] = f"={prev}{r}+1"
            prev = c
    return load_workbook(json.dumps({"name": "big", "cells": cells}), "json")


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--number", type=int, default=5, help="tokenize sweeps per sample")
    parser.add_argument("--repeat", type=int, default=5, help="samples per backend")
    args = parser.parse_args()

    corpus = formula_corpus()
    sheet = big_sheet()
    backends = kernels.available_backends()
    if backends == ["pure"]:
        print("compiled kernels not built; benchmarking pure only")

    results: dict[str, dict[str, float]] = {}
    for backend in backends:
        kernels.set_backend(backend)

        def sweep():
            for text in corpus:
                kernels.tokenize(text, 0)

        def full_parse():
            parse_all(sheet)

        tok = best_of(lambda: [sweep() for _ in range(args.number)], args.repeat)
        parse = best_of(full_parse, args.repeat)
        results[backend] = {
            "tokenize_ms": tok / args.number * 1000,
            "parse_all_ms": parse * 1000,
        }

    kernels.set_backend(backends[-1])

    width = max(len(b) for b in results)
    print(f"{'backend':<{width}}  {'tokenize 2k formulas':>22}  {'parse_all 10k cells':>20}")
    for backend, row in results.items():
        print(
            f"{backend:<{width}}  {row['tokenize_ms']:>19.2f} ms"
            f"  {row['parse_all_ms']:>17.2f} ms"
        )
    if len(results) == 2:
        tok_speedup = results["pure"]["tokenize_ms"] / results["compiled"]["tokenize_ms"]
        parse_speedup = results["pure"]["parse_all_ms"] / results["compiled"]["parse_all_ms"]
        print(f"\ncompiled speedup: {tok_speedup:.1f}x tokenize, {parse_speedup:.1f}x parse_all")


if __name__ == "__main__":
    main()
