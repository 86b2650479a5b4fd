"""Small grammars used by the demos and tests."""

#: ``a`` aligned and ``b`` after it, both in a block indented past the
#: surrounding one.
TOY = """\
start <- ind(>, aln("a" "b"));
"""

#: Right recursion guarded by a terminal: well-formed.
RIGHT_RECURSIVE = """\
X <- "a" X / eps;
start <- X;
"""

#: Direct left recursion: rejected by the well-formedness check.
LEFT_RECURSIVE = """\
X <- X;
start <- X;
"""

#: Safe recursion behind an alternative that never fails.
SAFE_CHOICE = """\
X <- eps / X;
start <- X;
"""

#: Well-formed as written, but rewriting its choice into disjoint form
#: makes the negated prefix nullable and exposes the recursion on X.
DISJOINT_BREAKS_WF = """\
X <- !("a" / eps) X;
start <- X;
"""

#: Haskell ``do`` blocks: either a layout block of aligned statements, or
#: an explicit braced block where indentation is irrelevant.  Statements
#: are kept in token mode ``>`` so that only their first token may sit on
#: the block's baseline.
DO_BLOCKS = """\
# Haskell do-notation, layout and explicit-brace forms
start  <- loc(>=, "main" "=" doexp);
doexp  <- ind(>, "do") (istmts / stmts);
istmts <- ind(>, aln(stmt)+);
stmts  <- ind(>, "{") ind(any, stmt (";" stmt)* ";"? "}");
stmt   <- loc(>, "x" "<-" "e" / "e");
"""

DO_LAYOUT_INPUT = """\
main = do x <- e
          e
          x <- e
"""

DO_BRACED_INPUT = """\
main = do { x <- e ;
  e ; x <- e ; }
"""

DO_MISALIGNED_INPUT = """\
main = do x <- e
           e
"""
