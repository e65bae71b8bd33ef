import pytest

from atiyahlab.config import (
    ConfigError,
    load_config,
    parse_bool,
    parse_fat_points,
    parse_int,
    parse_int_list,
    parse_level_mult_pairs,
    parse_plain_points,
)

GOOD = """\
[field]
p = 0
k = 1

[curve]
a = 0, 0, 0, -1, 1   ; short model

[surface]
q = 0, 1
T = -1, 1

[run]
seed = 42

[job.first]
type = h0
levels = 0..2

[job.second]
type = lambda
m = 1, 2
base = 1, 1
w0 = 2
"""


def write(tmp_path, text, name="exp.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_load_good_config(tmp_path):
    cfg = load_config(write(tmp_path, GOOD))
    assert cfg.p == 0 and cfg.k == 1
    assert cfg.curve_coeffs == ["0", "0", "0", "-1", "1"]
    assert cfg.q == ("0", "1")
    assert cfg.T == ("-1", "1")
    assert cfg.seed == 42
    assert [j.ident for j in cfg.jobs] == ["first", "second"]
    assert cfg.jobs[0].kind == "h0"
    assert cfg.jobs[0].params == {"levels": "0..2"}
    assert cfg.jobs[1].params["base"] == "1, 1"
    echo = cfg.echo()
    assert echo["field"] == {"p": 0, "k": 1}
    assert echo["jobs"][1]["type"] == "lambda"


def test_defaults(tmp_path):
    text = "[field]\np = 3\nk = 2\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n"
    cfg = load_config(write(tmp_path, text))
    assert cfg.T is None and cfg.seed == 0 and cfg.jobs == []
    assert cfg.p == 3 and cfg.k == 2


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/path.ini")


@pytest.mark.parametrize("text,fragment", [
    ("[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n", "field"),
    ("[field]\np = 0\n[surface]\nq = 0,1\n", "curve"),
    ("[field]\np = 0\n[curve]\na = 1,2,3\n[surface]\nq = 0,1\n", "five"),
    ("[field]\np = 0\n[curve]\na = 0,0,0,-1,1\n", "surface"),
    ("[field]\np = 0\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1,2\n", "two"),
    ("[field]\np = -3\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n", "invalid"),
    ("[field]\np = 0\nk = 2\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n",
     "invalid"),
    ("[field]\np = x\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n", "integer"),
])
def test_structural_errors(tmp_path, text, fragment):
    with pytest.raises(ConfigError) as err:
        load_config(write(tmp_path, text))
    assert fragment in str(err.value)


BASE = "[field]\np = 0\n[curve]\na = 0,0,0,-1,1\n[surface]\nq = 0,1\n"


def test_job_errors(tmp_path):
    with pytest.raises(ConfigError, match="no 'type'"):
        load_config(write(tmp_path, BASE + "[job.a]\nlevels = 1\n"))
    with pytest.raises(ConfigError, match="unknown type"):
        load_config(write(tmp_path, BASE + "[job.a]\ntype = frobnicate\n"))
    with pytest.raises(ConfigError, match="needs a name"):
        load_config(write(tmp_path, BASE + "[job.]\ntype = h0\n"))
    # configparser itself forbids duplicate section names, which covers
    # duplicate job ids at the file level
    import configparser
    with pytest.raises((ConfigError, configparser.Error)):
        load_config(write(tmp_path,
                          BASE + "[job.a]\ntype = h0\n[job.a]\ntype = mu\n"))


def test_parse_int_list():
    assert parse_int_list("0..4, 7", "x") == [0, 1, 2, 3, 4, 7]
    assert parse_int_list("3", "x") == [3]
    assert parse_int_list("1, 1, 2", "x") == [1, 1, 2]
    with pytest.raises(ConfigError):
        parse_int_list("7..3", "x")
    with pytest.raises(ConfigError):
        parse_int_list("", "x")
    with pytest.raises(ConfigError):
        parse_int_list("a..b", "x")


def test_parse_bool():
    assert parse_bool("true", "x") and parse_bool("Yes", "x") and parse_bool("1", "x")
    assert not parse_bool("off", "x")
    with pytest.raises(ConfigError):
        parse_bool("maybe", "x")


def test_parse_int():
    assert parse_int(" -7 ", "x") == -7
    with pytest.raises(ConfigError):
        parse_int("3.5", "x")


def test_parse_fat_points():
    pts = parse_fat_points("1 : 1 : 2 : 5; 0:-1:3:2", "pts")
    assert pts == [("1", "1", "2", 5), ("0", "-1", "3", 2)]
    with pytest.raises(ConfigError):
        parse_fat_points("1:1:2", "pts")
    with pytest.raises(ConfigError):
        parse_fat_points(";", "pts")


def test_parse_plain_points():
    assert parse_plain_points("1:1:0", "pts") == [("1", "1", "0")]
    with pytest.raises(ConfigError):
        parse_plain_points("1:1:0:4", "pts")


def test_parse_level_mult_pairs():
    assert parse_level_mult_pairs("3:2; 6:3", "pairs") == [(3, 2), (6, 3)]
    with pytest.raises(ConfigError):
        parse_level_mult_pairs("3", "pairs")
