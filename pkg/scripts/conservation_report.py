"""Divergences of the constructed conserved vectors and their differences from the printed ones."""
from porosym.suites import check_conservation


def main():
    print(check_conservation(h_zero=True).render())
    print()
    print(check_conservation(h_zero=False).render())


if __name__ == "__main__":
    main()
