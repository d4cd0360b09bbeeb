#!/usr/bin/env python3
"""Print the rank-by-rank decompositions of an iterated tensor product
and the rank where they stabilize.

The default factors reproduce the quadruple product whose table grows
from 5 terms at rank 2 to the 14-term stable list at rank 4; pass other
comma-form signatures to explore different products.
"""

import argparse

from isotypic import GroupFamily, dim, parse, render, stable_tensor, tensor_multi


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("sigs", nargs="*", default=["1", "2", "2", "3"])
    args = ap.parse_args()
    factors = [parse(s) for s in args.sigs]

    result = stable_tensor(factors)
    label = " x ".join(f"({render(f)})" for f in factors)
    print(f"{label}: stabilizes at k0 = {result.k0}")
    for k, probe in result.probes:
        print(f"\nrank {k}: {len(probe)} terms")
        for sig, mult in probe:
            print(f"  {mult:>3}  {render(sig)}")

    # Dimension bookkeeping at the smallest probed rank.
    k = result.probes[0][0]
    group = GroupFamily("u", k)
    product_dim = 1
    for f in factors:
        product_dim *= dim(group, f)
    table = tensor_multi(factors, k)
    spectral = sum(mult * dim(group, sig) for sig, mult in table)
    print(f"\ndimension check at rank {k}: {product_dim} == {spectral}")
    assert product_dim == spectral


if __name__ == "__main__":
    main()
