"""Smoke test for the extension module. Run build.sh first."""
import os
import sys
import tempfile
from fractions import Fraction

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))
import surveynet_py as sn

# two opposed blocks of three on four 3-point items
rows = [[0, 0, 0, 0]] * 3 + [[2, 2, 2, 2]] * 3
rows[1] = [0, 0, 0, 1]
rows[4] = [2, 2, 1, 2]
s = sn.Survey.from_codes([3, 3, 3, 3], rows)
assert s.n_participants == 6 and s.n_items == 4
assert s.normalized()[0][0] == "-1"
assert s.normalized()[1][3] == "0"

assert sn.pair_weight(s, 0, 2) == "4"
assert sn.pair_weight(s, 0, 1, mode="score") == "3"

sel = sn.select_threshold(s, target_fraction=Fraction(1, 2))
assert sel["chosen_threshold"] == "3", sel

g = sn.project(s, "auto")
assert g.threshold_used == "3"
comps = sn.components(g)
assert sorted(len(c) for c in comps) == [3, 3], comps

g2 = sn.Graph.from_graphml(g.to_graphml())
assert g2.edges() == g.edges()
assert g.to_edgelist().startswith("u,v,weight")

gn = sn.girvan_newman(g, 2)
assert gn["status"] == "already_split"

att = sn.attitudes(s)
assert att.kind == "attitude" and att.n_nodes == 4
census = sn.census(s)
assert census["distinct"] >= 2, census

svg = sn.render_svg(g, seed=3, iterations=50)
assert svg.startswith("<svg") or svg.startswith("<?xml")
assert svg == sn.render_svg(g, seed=3, iterations=50)
assert "<svg" in sn.render_bipartite_svg(s)
pos = sn.layout(g, seed=3, iterations=50)
assert set(pos) == set(g.nodes)

with tempfile.TemporaryDirectory() as d:
    csv = os.path.join(d, "s.csv")
    schema = os.path.join(d, "schema.json")
    with open(csv, "w") as f:
        f.write("id,a,b\np1,1,0\np2,1,1\np3,0,NA\n")
    with open(schema, "w") as f:
        f.write('{"id_column":"id","items":[{"id":"a","scale":2},{"id":"b","scale":2}],"missing_token":"NA"}')
    loaded = sn.Survey.load(csv, schema)
    assert loaded.n_participants == 2, loaded

try:
    sn.attitudes(sn.Survey.from_codes([4], [[1]]))
except sn.SurveynetError as e:
    assert "too_few_items" in str(e)
else:
    raise AssertionError("expected SurveynetError")

print("smoke test ok:", repr(s), repr(g))
