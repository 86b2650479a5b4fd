"""Remove alignment and token positions from a do-block grammar.

    python demos/do_blocks_pipeline.py
"""
import json

from indent_peg import (
    EQ, check_equivalence, lex, parse, parse_grammar_text, pretty_print, run_pipeline,
)
from indent_peg.corpus import DO_BLOCKS, DO_BRACED_INPUT, DO_LAYOUT_INPUT, DO_MISALIGNED_INPUT
from indent_peg.interpreter import format_outcome


def main():
    g = parse_grammar_text(DO_BLOCKS)
    result = run_pipeline(g, simplify_output=True)
    out = result.grammar

    print("stages:")
    for s in result.stages:
        print(f"  {s.stage:<9} rules={s.rules:<3} nodes={s.nodes:<4} "
              f"well-formed={'-' if s.well_formed is None else s.well_formed}")
    print("\ntransformed grammar:\n")
    print(pretty_print(out))

    for label, text in (("layout", DO_LAYOUT_INPUT), ("braced", DO_BRACED_INPUT),
                        ("misaligned", DO_MISALIGNED_INPUT)):
        tokens = lex(text, g.terminals)
        before, after = parse(g, tokens, EQ), parse(out, tokens, EQ)
        print(f"{label:<11} before: {format_outcome(before)}")
        print(f"{'':<11} after:  {format_outcome(after)}")

    rep = check_equivalence(g, out, trials=1000, mode=EQ, max_len=8, max_col=10)
    print("\nrandom differential check:", json.dumps({"trials": rep.trials,
                                                      "disagreements": len(rep.disagreements)}))


if __name__ == "__main__":
    main()
