"""
A sweep over small branch data
==============================

Runs every check on all covers with p <= 3, quotient genus <= 1 and at most
six branch points, then prints one line per datum.
"""

from nilsection.cli import sweep

reports = sweep(3, 1, 6)
print(f"{'p':>2} {'h':>2} {'monodromies':18} {'g':>2} {'dim H1':>6} {'classes':>7}  checks")
for r in reports:
    flags = " ".join(f for f in r.FLAGS if getattr(r, f))
    mon = ",".join(map(str, r.monodromies)) + (" *" if any(r.handle_images) else "")
    dim = "-" if r.h1_dimension is None else r.h1_dimension
    cls = "-" if r.section_class_count is None else r.section_class_count
    print(f"{r.p:>2} {r.h:>2} {mon:18} {r.genus:>2} {dim:>6} {cls:>7}  {flags}")
print(sum(r.passed for r in reports), "of", len(reports), "pass  (* = nonzero handle images)")
