"""The acceptance gate: one test per criterion, each reporting PASS or FAIL."""
import contextlib
import random

from conftest import ACCEPTANCE_LINES
from indent_peg import (
    EPS, EQ, FAIL, GE, GT, Align, Choice, FuelExhausted, Indent, IndentSet, Loc,
    NonTerminal, Not, ParseState, Seq, Success, Terminal, approximate, check_equivalence,
    lex, make_disjoint, parse, parse_grammar_text, parse_std, parse_strict, run_pipeline,
    well_formed,
)
from indent_peg.analysis import CLAUSE0
from indent_peg.corpus import DISJOINT_BREAKS_WF, DO_BLOCKS, DO_BRACED_INPUT, DO_LAYOUT_INPUT, TOY
from indent_peg.fuzz import (
    random_grammar, random_relation, random_state, random_tokens, walk_tokens,
)
from indent_peg.grammar import desugar
from indent_peg.interpreter import FAILURE, initial_state, outcome_code
from indent_peg.relations import INF
from indent_peg.transform import Splitter
from laws import ALL_LAWS, check_law
from props import (
    descent_violations, layout_grammars, prepared_grammars, split_invariant_violations,
    wf_repetition_free_grammars,
)

A, B = Terminal("a"), Terminal("b")


@contextlib.contextmanager
def criterion(n, label):
    try:
        yield
    except BaseException:
        line = f"AC{n:02d} {label}: FAIL"
        print(line)
        ACCEPTANCE_LINES.append(line)
        raise
    line = f"AC{n:02d} {label}: PASS"
    print(line)
    ACCEPTANCE_LINES.append(line)


def toks(text):
    return lex(text, mode="annotated")


def test_ac01_toy_example():
    with criterion(1, "toy example"):
        g = parse_grammar_text(TOY)
        out = parse(g, toks("a@2 b@3"), GE)
        assert out == Success(ParseState((), IndentSet.of(0, 1), False))


def test_ac02_intermediate_states():
    with criterion(2, "intermediate toy states"):
        g = parse_grammar_text(TOY)
        past_zero = IndentSet.from_intervals([(1, INF)])
        st = ParseState(toks("a@2 b@3"), past_zero, False)
        assert parse_std(g, Align(Seq(A, B)), GE, st) == Success(
            ParseState((), IndentSet.of(2), False))
        st = ParseState(toks("a@2 b@3"), past_zero, True)
        assert parse_std(g, A, GE, st) == Success(
            ParseState(toks("b@3"), IndentSet.of(2), False))


def test_ac03_non_distributivity():
    with criterion(3, "indentation does not distribute over sequence"):
        inp = toks("a@1 b@2")
        whole = parse_grammar_text('start <- ind(>, "a" "b");')
        parts = parse_grammar_text('start <- ind(>, "a") ind(>, "b");')
        assert parse(whole, inp, EQ) is FAILURE
        assert parse(parts, inp, EQ) == Success(ParseState((), IndentSet.of(0), False))


def test_ac04_law_suite():
    with criterion(4, "equivalence laws, 500 trials each"):
        failures = {}
        for law in ALL_LAWS:
            done, bad = check_law(law, trials=500)
            if done < 500 or bad:
                failures[law.name] = (done, bad[:1])
        assert not failures, failures


def _random_cases(rng, count, fuel=5000):
    """Random (grammar, expression, mode, state, outcome) with a conclusive outcome."""
    while count:
        g = random_grammar(rng, n_rules=2, depth=3)
        nodes = list(g.nodes())
        for _ in range(10):
            e = rng.choice(nodes)
            mode = random_relation(rng)
            st = random_state(rng, ["a", "b"])
            out = parse_std(g, e, mode, st, fuel=fuel)
            if isinstance(out, FuelExhausted):
                continue
            yield g, e, mode, st, out
            count -= 1
            if not count:
                return


def test_ac05_interpreter_properties():
    with criterion(5, "determinism and monotone descent"):
        rng = random.Random(105)
        bad, successes = [], 0
        for g, e, mode, st, out in _random_cases(rng, 1500):
            problems = descent_violations(st, out)
            if parse_std(g, e, mode, st, fuel=5000) != out:
                problems.append("not deterministic")
            if problems:
                bad.append((str(g), str(e), str(mode), str(st), problems))
            successes += isinstance(out, Success)
        assert not bad, bad[:3]
        assert successes > 300


def test_ac06_approximation_soundness():
    with criterion(6, "approximation soundness"):
        rng = random.Random(106)
        tables, bad, codes = {}, [], set()
        for g, e, mode, st, out in _random_cases(rng, 1500):
            table = tables.get(id(g))
            if table is None:
                tables.clear()
                table = tables[id(g)] = approximate(g)
            code = outcome_code(st, out)
            codes.add(code)
            if code not in table[e]:
                bad.append((str(g), str(e), str(st), code))
        assert not bad, bad[:3]
        assert codes == {-1, 0, 1}


def _termination_corpus():
    rng = random.Random(107)
    for g in wf_repetition_free_grammars(rng, 200, n_rules=3, depth=3):
        approx = approximate(g)
        inputs = [walk_tokens(rng, g, max_len=10) for _ in range(3)]
        inputs += [random_tokens(rng, ["a", "b"], max_len=10) for _ in range(3)]
        yield g, approx, inputs


def test_ac07_wellformed_grammars_terminate():
    with criterion(7, "well-formed grammars terminate"):
        exhausted, runs = [], 0
        for g, approx, inputs in _termination_corpus():
            for tokens in inputs:
                for mode in (EQ, GT, GE, random_relation(random.Random(len(tokens)))):
                    st = initial_state(tokens)
                    std = parse_std(g, g.start, mode, st, fuel=10**6)
                    strict = parse_strict(g, g.start, mode, st, approx, fuel=10**6)
                    runs += 1
                    if isinstance(std, FuelExhausted) or isinstance(strict, FuelExhausted):
                        exhausted.append((str(g), tokens, str(mode)))
        assert not exhausted, exhausted[:3]
        assert runs == 200 * 6 * 4


def test_ac08_strict_implies_standard():
    with criterion(8, "strict outcomes agree with standard"):
        bad = []
        for g, approx, inputs in _termination_corpus():
            for tokens in inputs:
                for mode in (EQ, GE):
                    st = initial_state(tokens)
                    strict = parse_strict(g, g.start, mode, st, approx, fuel=10**6)
                    if isinstance(strict, FuelExhausted):
                        continue
                    std = parse_std(g, g.start, mode, st, fuel=10**6)
                    if std != strict:
                        bad.append((str(g), tokens, str(mode), strict, std))
        assert not bad, bad[:3]


def test_ac09_splitting_invariant():
    with criterion(9, "splitting invariant"):
        rng = random.Random(109)
        checked, bad = 0, []
        for g in prepared_grammars(rng, 200):
            n, b = split_invariant_violations(g, rng, trials=20)
            checked += n
            bad += b
        assert not bad, bad[:3]
        assert checked > 200 * 20 * 0.9


def test_ac10_end_to_end_elimination():
    with criterion(10, "alignment and position elimination"):
        rng = random.Random(110)
        bad = []
        for g, out in layout_grammars(rng, 100):
            assert not any(isinstance(n, (Align, Loc)) for n in out.nodes()), str(out)
            rep = check_equivalence(g, out, trials=1000, mode=EQ, seed=rng.randrange(10**6))
            if not rep.equivalent:
                bad.append((str(g), str(rep.disagreements[0])))
        assert not bad, bad[:3]


def test_ac11_disjoint_choice_regression():
    with criterion(11, "disjoint choices and well-formedness"):
        g = parse_grammar_text(DISJOINT_BREAKS_WF)
        assert well_formed(g).grammar_ok
        d = make_disjoint(g)
        wf = well_formed(d)
        assert not wf.grammar_ok
        assert any("recursion cycle X -> X" in w for _, w in wf.failures())
        assert well_formed(g, approximate(g, CLAUSE0)).rules == \
            well_formed(d, approximate(d, CLAUSE0)).rules
        rng = random.Random(111)
        for _ in range(100):
            r = desugar(random_grammar(rng, n_rules=3, depth=3))
            rd = make_disjoint(r)
            assert well_formed(r, approximate(r, CLAUSE0)).rules == \
                well_formed(rd, approximate(rd, CLAUSE0)).rules, str(r)


def test_ac12_split_table():
    with criterion(12, "g0/g1 table"):
        # C consumes or fails: 0 not in its entry, -1 is
        # N never fails: 0 in its entry, -1 is not
        g = parse_grammar_text('X <- "a" X / eps; C <- "a"; N <- "b" / eps; start <- X;')
        approx = approximate(g)
        assert approx.rule("C") == {1, -1} and approx.rule("N") == {0, 1}
        sp = Splitter(g, approx)
        X, C, N = NonTerminal("X"), NonTerminal("C"), NonTerminal("N")
        g0, g1 = sp.g0, sp.g1
        r = GT
        # g0
        assert g0(EPS) == EPS
        assert g0(A) == FAIL
        assert g0(X) == NonTerminal("X__g0")
        assert g0(Seq(N, C)) == Seq(g0(N), g0(C))
        assert g0(Seq(C, N)) == FAIL
        assert g0(Choice(C, N)) == Choice(g0(C), g0(N))
        assert g0(Choice(N, C)) == g0(N)
        assert g0(Not(C)) == Not(Choice(g1(C), g0(C)))
        assert g0(Indent(r, N)) == Indent(r, g0(N))
        assert g0(Loc(r, N)) == Loc(r, g0(N))
        assert g0(Align(N)) == Align(g0(N))
        # g1
        assert g1(EPS) == FAIL
        assert g1(A) == A
        assert g1(X) == X
        assert g1(Seq(C, N)) == Choice(Seq(g1(C), g1(N)),
                                       Choice(Seq(g1(C), g0(N)), Seq(g0(C), g1(N))))
        assert g1(Choice(C, N)) == Choice(g1(C), g1(N))
        assert g1(Choice(N, C)) == g1(N)
        assert g1(Not(C)) == FAIL
        assert g1(Indent(r, C)) == Indent(r, g1(C))
        assert g1(Loc(r, C)) == Loc(r, g1(C))
        assert g1(Align(C)) == Align(g1(C))
        # companions are g0 of the definitions
        companions = sp.finish()
        assert companions["X__g0"] == g0(g.rules["X"])
        assert companions["C__g0"] == g0(g.rules["C"]) == FAIL


def test_ac13_do_blocks():
    with criterion(13, "do-block grammar"):
        g = parse_grammar_text(DO_BLOCKS)
        out = run_pipeline(g).grammar
        for text in (DO_LAYOUT_INPUT, DO_BRACED_INPUT):
            tokens = lex(text, g.terminals)
            before = parse(g, tokens, EQ)
            assert isinstance(before, Success) and before.state.rest == ()
            assert parse(g, tokens, GE) == before
            assert parse(out, tokens, EQ) == before
