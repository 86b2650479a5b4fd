"""Which rewrites of layout operators are safe, checked on small examples.

    python demos/layout_laws.py
"""
from indent_peg import EQ, check_equivalence, parse_grammar_text

PAIRS = [
    # (left, right, expected to agree?)
    ('ind(>, "a" "b")', 'ind(>, "a") ind(>, "b")', False),
    ('ind(>, "a" / "b")', 'ind(>, "a") / ind(>, "b")', True),
    ('aln("a" "b")', 'aln("a") "b"', True),
    ('aln(!"b" "a")', 'aln(!"b") aln("a")', True),
    ('loc(>, "a" "b")', 'loc(>, "a") loc(>, "b")', True),
    ('aln("a")', 'loc(=, "a")', True),
    ('ind(>=, ind(>, "a"))', 'ind(>, "a")', True),
]


def main():
    for left, right, expected in PAIRS:
        ga = parse_grammar_text(f"start <- {left};")
        gb = parse_grammar_text(f"start <- {right};")
        rep = check_equivalence(ga, gb, trials=2000, mode=EQ, seed=1)
        verdict = "agree" if rep.equivalent else "differ"
        note = "" if rep.equivalent == expected else "   (unexpected!)"
        print(f"{left:<24} vs {right:<28} {verdict}{note}")
        if rep.disagreements:
            print(f"    e.g. {rep.disagreements[0]}")


if __name__ == "__main__":
    main()
