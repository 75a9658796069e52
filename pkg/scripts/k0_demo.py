"""Walk through the two-object, two-attribute example context.

Prints the measures of one subset, the cut concepts of all three flavors,
their dual partners, and a few model-checking results.
"""

from fractions import Fraction
from pathlib import Path

from wmlfca.concepts import ConceptFlavor, Duality, dualize, enumerate_concepts
from wmlfca.core import Sort, format_degree, measures
from wmlfca.io import lattice_to_dot, load_context, load_model
from wmlfca.semantics import Evaluator
from wmlfca.syntax import parse

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def main() -> None:
    ctx = load_context(DATA / "k0.csv")
    c = Fraction(3, 5)
    print("incidence:")
    for g, row in zip(ctx.objects, ctx.incidence):
        print(f"  {g}: " + ", ".join(f"{m}={format_degree(v)}" for m, v in zip(ctx.attributes, row)))

    subset = ctx.crisp(Sort.OBJECT, ["g1"])
    for m in ctx.attributes:
        pi, nec, gp, pc = measures(ctx, m, subset)
        print(f"measures of {{g1}} seen from {m}: possibility {format_degree(pi)}, necessity "
              f"{format_degree(nec)}, guaranteed {format_degree(gp)}, potential {format_degree(pc)}")

    for flavor in ConceptFlavor:
        lattice = enumerate_concepts(ctx, flavor, c)
        print(f"\n{flavor.value} concepts at c = {format_degree(c)}:")
        for k in lattice:
            print(f"  {k}")
    formal = enumerate_concepts(ctx, ConceptFlavor.FORMAL, c)
    print("\nduals of the formal concepts (complemented context):")
    for k in formal:
        print(f"  {k}  ->  {dualize(k, Duality.B_O)}  and  {dualize(k, Duality.B_P)}")
    print("\nHasse diagram:")
    print(lattice_to_dot(formal), end="")

    model = load_model(DATA / "k0_model.json")
    ev = Evaluator(model)
    print("\nmodel checking (p = {g1}, q = {m1}):")
    for text in ("[0]_p q", "[0.5]_p q", "[[0.3]]_p q", "<0.5>_p q", "p -> [0.4]_p <0.6+>_o p"):
        phi = parse(text)
        print(f"  {text:28} true at {ev.truth_set(phi).members}")


if __name__ == "__main__":
    main()
