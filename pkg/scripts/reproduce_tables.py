"""Print the commutation, adjoint and invariant tables with their published-table checks."""
import time

from porosym.cli import render_rows, table_rows
from porosym.suites import check_adjoint_tables, check_commutation, check_invariants, check_killing


def main():
    for which, check in (("commutation", check_commutation), ("adjoint", check_adjoint_tables),
                         ("invariants", check_invariants)):
        start = time.perf_counter()
        print(render_rows(table_rows(which), "text"))
        print(check().render())
        print(f"({time.perf_counter() - start:.2f} s)\n")
    print(check_killing().render())


if __name__ == "__main__":
    main()
