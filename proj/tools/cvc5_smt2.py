#!/usr/bin/env python3
"""Run an SMT-LIB 2 file through the cvc5 Python bindings (pip install cvc5).

Usage: cvc5_smt2.py FILE.  Prints the solver's responses, one per line,
like the cvc5 command-line binary.
"""
import sys

try:
    import cvc5
except ImportError:
    sys.exit("cvc5_smt2.py: the cvc5 Python package is not installed")


def main():
    if len(sys.argv) != 2:
        sys.exit("usage: cvc5_smt2.py FILE")
    tm = cvc5.TermManager()
    solver = cvc5.Solver(tm)
    symbols = cvc5.SymbolManager(tm)
    parser = cvc5.InputParser(solver, symbols)
    parser.setFileInput(cvc5.InputLanguage.SMT_LIB_2_6, sys.argv[1])
    while True:
        cmd = parser.nextCommand()
        if cmd.isNull():
            break
        out = cmd.invoke(solver, symbols).strip()
        if out:
            print(out, flush=True)


if __name__ == "__main__":
    main()
