import io

import pytest

from cwwkit import datasets
from cwwkit.datasets import DataError, load_feedback, load_power, serialize_feedback
from cwwkit.vocab import CRITERIA, TERMS

SINGLE_HEAD = ",".join(datasets.FEEDBACK_COLUMNS + datasets.WEIGHT_COLUMNS)
MULTI_HEAD = ",".join(datasets.FEEDBACK_COLUMNS)


@pytest.mark.parametrize("mode", datasets.MODES)
def test_bundled_corpus_round_trip(mode):
    corpus = datasets.bundled_corpus(mode)
    assert serialize_feedback(corpus) == datasets.bundled_corpus_text(mode)


@pytest.mark.parametrize("mode, games", [("multi", 2), ("single", 3)])
def test_record_counts(mode, games):
    corpus = datasets.bundled_corpus(mode)
    assert len(corpus) == 25 * games * 2 * 6
    assert corpus.users == tuple(range(1, 26))
    assert corpus.games == datasets.GAMES[mode]


@pytest.mark.parametrize("mode", datasets.MODES)
def test_every_word_resolves(mode):
    for r in datasets.bundled_corpus(mode):
        for crit in CRITERIA:
            assert r.words[crit] in TERMS[crit]


def test_user6_left4dead_first_frequency():
    groups = datasets.bundled_corpus("multi").groups()
    assert groups[(6, "left4dead", "T")]["F1"] == dict(zip(CRITERIA, ("BH", "AF", "FI", "M")))


def test_single_weights():
    corpus = datasets.bundled_corpus("single")
    assert corpus.weights_for(22, "subway_surfers") == dict(zip(CRITERIA, ("MLI", "I", "U", "U")))
    for user in range(1, 14):
        assert corpus.weights_for(user, "asphalt8") is None
    for user in range(14, 26):
        assert corpus.weights_for(user, "asphalt8") is not None


def test_fruit_ninja_corrections_logged():
    fixes = datasets.bundled_corrections()
    assert fixes and all(f["game"] == "fruit_ninja" for f in fixes)
    cell_fixes = [f for f in fixes if f["reason"].startswith("TABLE")]
    assert cell_fixes and all(len(f["corrected"].split()) == 12 for f in cell_fixes)


def _single(rows):
    return io.StringIO("\n".join([SINGLE_HEAD, *rows]) + "\n")


def test_missing_cell_reports_coordinates():
    with pytest.raises(DataError, match=r"<stream>:2 \(user=3, game=asphalt8, phase=E, frequency=F4\): missing cell"):
        load_feedback(_single(["3,asphalt8,E,F4,BH,AF,,M,Equal,Equal,Equal,Equal"]), "single")


def test_unknown_word_and_bad_fields():
    with pytest.raises(DataError, match="unknown word 'XX' for criterion app_rating"):
        load_feedback(_single(["3,asphalt8,E,F4,BH,XX,FI,M,Equal,Equal,Equal,Equal"]), "single")
    with pytest.raises(DataError, match="phase"):
        load_feedback(_single(["3,asphalt8,Q,F4,BH,AF,FI,M,Equal,Equal,Equal,Equal"]), "single")
    with pytest.raises(DataError, match="frequency"):
        load_feedback(_single(["3,asphalt8,E,F9,BH,AF,FI,M,Equal,Equal,Equal,Equal"]), "single")
    with pytest.raises(DataError, match="not an integer"):
        load_feedback(_single(["x,asphalt8,E,F4,BH,AF,FI,M,Equal,Equal,Equal,Equal"]), "single")
    with pytest.raises(DataError, match="header"):
        load_feedback(io.StringIO(MULTI_HEAD + "\n"), "single")
    with pytest.raises(DataError, match="unknown mode"):
        load_feedback(io.StringIO(""), "triple")


def test_weight_errors():
    with pytest.raises(DataError, match="mix Equal"):
        load_feedback(_single(["3,asphalt8,E,F4,BH,AF,FI,M,Equal,I,U,U"]), "single")
    with pytest.raises(DataError, match="unknown weight"):
        load_feedback(_single(["3,asphalt8,E,F4,BH,AF,FI,M,MLI,ZZ,U,U"]), "single")
    rows = ["3,asphalt8,E,F4,BH,AF,FI,M,MLI,I,U,U", "3,asphalt8,E,F5,BH,AF,FI,M,MLI,I,U,I"]
    with pytest.raises(DataError, match="weights differ"):
        load_feedback(_single(rows), "single")


def test_load_from_path(tmp_path):
    p = tmp_path / "c.csv"
    p.write_text(f"{MULTI_HEAD}\n1,left4dead,T,F1,BM,AM,MI,M\n", encoding="utf-8")
    corpus = load_feedback(p, "multi")
    assert len(corpus) == 1 and corpus.groups()[(1, "left4dead", "T")]["F1"]["app_type"] == "MI"


def test_power_table_values():
    power = datasets.bundled_power()
    assert power.at("subway_surfers", "F1") == 1.41
    assert power.at("fruit_ninja", "F6") == 3.26
    for game in datasets.GAMES["single"]:
        vals = [power.at(game, f) for f in datasets.FREQUENCIES]
        assert vals == sorted(vals) and len(set(vals)) == 6
    with pytest.raises(DataError):
        power.at("subway_surfers", "F9")


def test_power_rejects_non_monotone_and_permuted_rows():
    with pytest.raises(DataError, match="not increasing"):
        load_power(io.StringIO("game,frequency,watts\ng,F1,2.0\ng,F2,1.5\n"))
    with pytest.raises(DataError, match="out of order"):
        load_power(io.StringIO("game,frequency,watts\ng,F2,2.0\ng,F1,1.5\n"))
    with pytest.raises(DataError, match="not a number"):
        load_power(io.StringIO("game,frequency,watts\ng,F1,x\n"))


def test_golden_tables_loaded():
    golden = datasets.load_golden()
    assert golden[(6, "left4dead", "T", "pc")] == "F4"
    assert golden[(22, "subway_surfers", "T", "pc")] == "F2"
    engines = {k[3] for k in golden}
    assert engines == {"pc", "ep", "sm", "2tp"}
    assert not any(k[1] == "amnesia" and k[3] == "2tp" for k in golden)
