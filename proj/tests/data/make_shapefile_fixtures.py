#!/usr/bin/env python3
"""Writes the binary shapefile/dBASE fixtures used by test_chart.

Independent of the C++ reader and of the in-test byte builder: everything
here is laid out field by field from the published ESRI shapefile and
dBASE III descriptions. Run from this directory to refresh the files.
"""

import struct
from pathlib import Path

HERE = Path(__file__).parent


def shp_header(file_len_words: int, shape_type: int, bbox):
    h = struct.pack(">i", 9994)
    h += b"\x00" * 20
    h += struct.pack(">i", file_len_words)
    h += struct.pack("<ii", 1000, shape_type)
    h += struct.pack("<4d", *bbox)
    h += struct.pack("<4d", 0, 0, 0, 0)  # z/m ranges unused
    return h


def dbf(columns, rows):
    header = struct.pack("<B3BIHH", 3, 95, 7, 26, len(rows),
                         32 + 32 * len(columns) + 1,
                         1 + sum(w for (_, _, w) in columns))
    header += b"\x00" * 20
    for (name, typ, width) in columns:
        desc = name.encode().ljust(11, b"\x00")
        desc += typ.encode()
        desc += b"\x00" * 4
        desc += struct.pack("<BB", width, 0 if typ != "N" else 3)
        desc += b"\x00" * 14
        header += desc
    header += b"\x0d"
    body = b""
    for row in rows:
        body += b" "  # active record
        for (name, typ, width), value in zip(columns, row):
            if typ == "N":
                body += f"{value:>{width}.3f}".encode()[:width]
            else:
                body += str(value).encode().ljust(width)[:width]
    return header + body + b"\x1a"


def point_record(num, x, y):
    content = struct.pack("<i2d", 1, x, y)
    return struct.pack(">ii", num, len(content) // 2) + content


def poly_record(num, shape_type, parts):
    pts = [p for part in parts for p in part]
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    content = struct.pack("<i", shape_type)
    content += struct.pack("<4d", min(xs), min(ys), max(xs), max(ys))
    content += struct.pack("<ii", len(parts), len(pts))
    start = 0
    for part in parts:
        content += struct.pack("<i", start)
        start += len(part)
    for (x, y) in pts:
        content += struct.pack("<2d", x, y)
    return struct.pack(">ii", num, len(content) // 2) + content


def write(name: str, data: bytes):
    (HERE / name).write_bytes(data)
    print(f"{name}: {len(data)} bytes")


def main():
    # One point at lon 3.7, lat 51.0.
    rec = point_record(1, 3.7, 51.0)
    shp = shp_header((100 + len(rec)) // 2, 1, (3.7, 51.0, 3.7, 51.0)) + rec
    write("point.shp", shp)
    write("point.dbf", dbf([("name", "C", 10)], [("buoy-1",)]))

    # Empty file: header only, declared length 50 words.
    write("empty.shp", shp_header(50, 1, (0, 0, 0, 0)))
    write("empty.dbf", dbf([("name", "C", 10)], []))

    # A multipoint (type 8) record, which the reader must reject.
    content = struct.pack("<i", 8) + struct.pack("<4d", 0, 0, 1, 1)
    content += struct.pack("<i", 2) + struct.pack("<4d", 0, 0, 1, 1)
    rec = struct.pack(">ii", 1, len(content) // 2) + content
    write("multipoint.shp", shp_header((100 + len(rec)) // 2, 8, (0, 0, 1, 1)) + rec)
    write("multipoint.dbf", dbf([("name", "C", 10)], [("bad",)]))

    # depare polygon: a closed square ring with SOUACC/VERDAT attributes.
    ring = [(3.70, 51.00), (3.71, 51.00), (3.71, 51.01), (3.70, 51.01), (3.70, 51.00)]
    rec = poly_record(1, 5, [ring])
    shp = shp_header((100 + len(rec)) // 2, 5, (3.70, 51.00, 3.71, 51.01)) + rec
    write("depare.shp", shp)
    write("depare.dbf", dbf([("SOUACC", "N", 12), ("VERDAT", "N", 12), ("region", "C", 12)],
                            [(4.0, 2.5, "gent-01")]))

    # wtwaxs polyline with two parts.
    part_a = [(3.700, 51.000), (3.702, 51.000), (3.704, 51.001)]
    part_b = [(3.704, 51.001), (3.706, 51.002)]
    rec = poly_record(1, 3, [part_a, part_b])
    shp = shp_header((100 + len(rec)) // 2, 3, (3.700, 51.000, 3.706, 51.002)) + rec
    write("wtwaxs.shp", shp)
    write("wtwaxs.dbf", dbf([("region", "C", 12)], [("gent-01",)]))

    # Truncated variant: header declares more bytes than the file holds.
    good = (HERE / "point.shp").read_bytes()
    bad = shp_header(len(good) // 2 + 40, 1, (3.7, 51.0, 3.7, 51.0)) + good[100:]
    write("truncated.shp", bad)

    # A well-formed chart directory: one .shp/.dbf pair per feature class.
    chartdir = HERE / "chartdir"
    chartdir.mkdir(exist_ok=True)
    for name in ("depare.shp", "depare.dbf", "wtwaxs.shp", "wtwaxs.dbf"):
        (chartdir / name).write_bytes((HERE / name).read_bytes())
    print("chartdir refreshed")


if __name__ == "__main__":
    main()
