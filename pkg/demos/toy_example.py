"""Walk through the toy grammar one step at a time.

    python demos/toy_example.py
"""
from indent_peg import (
    GE, GT, Align, IndentSet, ParseState, Seq, Terminal, lex, parse, parse_grammar_text,
    parse_std,
)
from indent_peg.corpus import TOY
from indent_peg.interpreter import format_outcome


def show(label, outcome):
    print(f"{label:<40} {format_outcome(outcome)}")


def main():
    g = parse_grammar_text(TOY)
    tokens = lex("a@2 b@3", mode="annotated")
    print("grammar:", TOY.strip())
    print("input:   a@2 b@3, token mode >=\n")

    # ind(>, ...) hands its body every column that is past some current one
    inside = GT.preimage(IndentSet.naturals())
    print("indentations seen inside ind(>, ...):", inside)

    body = Align(Seq(Terminal("a"), Terminal("b")))
    show("aln(\"a\" \"b\") inside the block", parse_std(g, body, GE, ParseState(tokens, inside, False)))
    show("\"a\" with the alignment flag up", parse_std(g, Terminal("a"), GE, ParseState(tokens, inside, True)))
    show("whole grammar", parse(g, tokens, GE))

    # the block sits at 2, so the enclosing indentation must be below 2
    print("\nenclosing columns compatible with a block at 2:",
          GT.image(IndentSet.of(2)))

    for text in ("a@0 b@3", "a@2 b@2", "a@2 b@1"):
        show(f"input {text}", parse(g, lex(text, mode="annotated"), GE))


if __name__ == "__main__":
    main()
