#!/usr/bin/env python3
"""Merge downloaded oil-market series into the panel svarsoft reads.

Each input is a two-column CSV (date, value) with monthly dates in any format pandas
parses. The output has a `date,REA,PROD,RPO` header with YYYY-MM dates and raw levels;
the growth and log transforms are applied by svarsoft at load time.
"""

import argparse
import sys

import pandas as pd


def read_series(path: str, name: str) -> pd.Series:
    frame = pd.read_csv(path)
    if frame.shape[1] < 2:
        sys.exit(f"{path}: expected a date column and a value column")
    dates = pd.to_datetime(frame.iloc[:, 0]).dt.to_period("M")
    values = pd.to_numeric(frame.iloc[:, 1], errors="coerce")
    series = pd.Series(values.to_numpy(), index=dates, name=name)
    if series.index.duplicated().any():
        sys.exit(f"{path}: duplicate months")
    return series


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rea", required=True, help="real economic activity index")
    ap.add_argument("--prod", required=True, help="world crude oil production")
    ap.add_argument("--price", required=True, help="nominal crude oil price")
    ap.add_argument("--cpi", required=True, help="consumer price index used to deflate the price")
    ap.add_argument("--first", default="1970-12", help="first month kept (one before the sample, for growth)")
    ap.add_argument("--last", default="2015-12")
    ap.add_argument("--out", required=True)
    args = ap.parse_args()

    rea = read_series(args.rea, "REA")
    prod = read_series(args.prod, "PROD")
    price = read_series(args.price, "price")
    cpi = read_series(args.cpi, "cpi")

    panel = pd.concat([rea, prod, (price / cpi * 100.0).rename("RPO")], axis=1, join="inner")
    panel = panel.loc[pd.Period(args.first, "M"): pd.Period(args.last, "M")]
    expected = pd.period_range(args.first, args.last, freq="M")
    missing = expected.difference(panel.index)
    if len(missing) or panel.isna().any().any():
        sys.exit(f"gaps in the merged panel, first missing month: {missing[0] if len(missing) else 'NaN value'}")
    if (panel[["PROD", "RPO"]] <= 0).any().any():
        sys.exit("PROD and RPO must be positive before log transforms")

    panel.index = panel.index.strftime("%Y-%m")
    panel.to_csv(args.out, index_label="date", float_format="%.17g")
    print(f"wrote {len(panel)} months to {args.out}")


if __name__ == "__main__":
    main()
