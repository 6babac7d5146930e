import json
import math

import numpy as np
import pytest

from equimine import io
from equimine.data import sample_dir, sample_path
from equimine.errors import ParseError, ValidationError


class TestParseRatio:
    def test_fractions_exact(self):
        assert io.parse_ratio("1/3") == 1.0 / 3.0
        assert io.parse_ratio("7") == 7.0
        assert io.parse_ratio("0.5") == 0.5
        assert io.parse_ratio(" 2/9 ") == 2.0 / 9.0

    def test_bad_ratio(self):
        with pytest.raises(ParseError):
            io.parse_ratio("three")
        with pytest.raises(ParseError):
            io.parse_ratio("1/0")


class TestPairwiseCsv:
    def test_loads_sample(self):
        matrix = io.load_pairwise_csv(sample_path("pairwise.csv"))
        assert matrix.labels == ["EI", "IDG", "CEA", "MA", "HR", "ER", "SA"]
        assert matrix.entries[0, 1] == 0.5
        assert matrix.entries[1, 0] == 2.0
        # fraction cells parse exactly and reciprocity is enforced
        assert matrix.entries[3, 1] * matrix.entries[1, 3] == 1.0

    def test_row_label_mismatch(self, tmp_path):
        bad = tmp_path / "m.csv"
        bad.write_text(",A,B\nB,1,2\nA,1/2,1\n")
        with pytest.raises(ParseError, match="line 2"):
            io.load_pairwise_csv(bad)

    def test_bad_cell_reports_line(self, tmp_path):
        bad = tmp_path / "m.csv"
        bad.write_text(",A,B\nA,1,2\nB,oops,1\n")
        with pytest.raises(ParseError, match="line 3"):
            io.load_pairwise_csv(bad)


class TestDecisionCsv:
    def test_loads_sample_asteroids(self):
        matrix = io.load_decision_csv(sample_path("asteroids.csv"))
        assert matrix.alternative_labels == ["Didymos", "Anteros", "2001 CC21", "1992 TC"]
        assert matrix.indicator_labels == ["est_value_busd", "est_profit_busd", "delta_v_km_s"]
        kinds = [k.kind for k in matrix.indicator_kinds]
        assert kinds == ["benefit", "benefit", "cost"]
        assert matrix.values[1, 0] == 5570.0

    def test_mid_annotation(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("alt,a:benefit,b:mid=3.5\nx,1,2\ny,4,5\n")
        matrix = io.load_decision_csv(path)
        assert matrix.indicator_kinds[1].kind == "intermediate"
        assert matrix.indicator_kinds[1].x_best == 3.5

    def test_missing_annotation(self, tmp_path):
        path = tmp_path / "d.csv"
        path.write_text("alt,a,b:cost\nx,1,2\n")
        with pytest.raises(ParseError, match="annotation"):
            io.load_decision_csv(path)


class TestIndicatorTable:
    def test_loads_sample(self):
        table = io.load_indicator_table(sample_path("indicators.csv"))
        assert len(table.records) == 40
        assert table.countries[0] == "Arcadia"
        assert table.years == [2017, 2018, 2019, 2020, 2021]
        countries, years = table.require_complete_panel()
        assert len(countries) == 8

    def test_two_row_file(self, tmp_path):
        path = tmp_path / "i.csv"
        path.write_text("country,year,ei,idg,cea,ma,hr,er,sa\n"
                        "X,2020,.1,.2,.3,.4,.5,.6,.7\n"
                        "X,2021,.2,.3,.4,.5,.6,.7,.8\n")
        table = io.load_indicator_table(path)
        assert len(table.records) == 2

    def test_missing_column_names_line(self, tmp_path):
        path = tmp_path / "i.csv"
        path.write_text("country,year,ei,idg,cea,ma,hr,er,sa\n"
                        "X,2020,.1,.2,.3,.4,.5,.6\n")
        with pytest.raises(ParseError, match="line 2"):
            io.load_indicator_table(path)

    def test_duplicate_key_rejected(self, tmp_path):
        path = tmp_path / "i.csv"
        path.write_text("country,year,ei,idg,cea,ma,hr,er,sa\n"
                        "France,2020,.1,.2,.3,.4,.5,.6,.7\n"
                        "France,2020,.2,.3,.4,.5,.6,.7,.8\n")
        with pytest.raises(ValidationError, match="France"):
            io.load_indicator_table(path)

    def test_incomplete_panel_detected(self, tmp_path):
        path = tmp_path / "i.csv"
        path.write_text("country,year,ei,idg,cea,ma,hr,er,sa\n"
                        "X,2020,.1,.2,.3,.4,.5,.6,.7\n"
                        "Y,2021,.2,.3,.4,.5,.6,.7,.8\n")
        table = io.load_indicator_table(path)
        with pytest.raises(ValidationError, match="missing"):
            table.require_complete_panel()


class TestGdpCsv:
    def test_loads_sample(self):
        gdp = io.load_gdp_csv(sample_path("gdp.csv"))
        assert gdp["Elbonia"] == 145.0
        assert len(gdp) == 8

    def test_duplicate_country(self, tmp_path):
        path = tmp_path / "g.csv"
        path.write_text("country,gdp\nA,1\nA,2\n")
        with pytest.raises(ValidationError, match="duplicate"):
            io.load_gdp_csv(path)


class TestScenario:
    def test_loads_sample(self):
        params, window, mode, metadata = io.load_scenario(sample_path("scenario.json"))
        assert params.total_value == 70e12
        assert window.t2 == 30.0
        assert window.cost == 5e12
        assert mode == "cumulative"
        assert metadata["name"] == "baseline-70T"

    def test_defaults_and_inf(self, tmp_path):
        path = tmp_path / "s.json"
        path.write_text("{}")
        params, window, mode, _ = io.load_scenario(path)
        assert params.dof == 5.0 and params.location == 15.0 and params.scale == 5.0
        assert window.t1 == 0.0 and math.isinf(window.t2) and window.cost == 0.0
        assert mode == "cumulative"

    def test_asteroid_valuation_scenario(self):
        # sample built from the bundled asteroid valuations; the delta-v
        # column rides along as metadata only
        params, window, mode, metadata = io.load_scenario(sample_path("anteros.json"))
        assert params.total_value == 5.57e12
        assert window.cost == 4.32e12
        assert math.isinf(window.t2)
        assert metadata["delta_v_km_s"] == 5.44


class TestTrainConfigFile:
    def test_loads_sample(self):
        spec, config = io.load_train_config(sample_path("train.json"))
        assert spec.sizes == (7, 16, 1)
        assert config.learning_rate == 0.1
        assert config.epochs == 5000
        assert config.seed == 0


class TestWriters:
    def test_fmt6(self):
        assert io.fmt6(0.0909090909) == 0.0909091
        assert io.fmt6(70e12) == 70e12
        assert io.fmt6(float("inf")) is None
        assert io.fmt6(float("nan")) is None

    def test_config_digest_stable(self):
        a = io.config_digest({"b": 1, "a": "x"})
        b = io.config_digest({"a": "x", "b": 1})
        assert a == b
        assert a != io.config_digest({"a": "x", "b": 2})

    def test_csv_full_precision_roundtrip(self, tmp_path):
        path = tmp_path / "out.csv"
        value = 1 / 3
        io.write_csv(path, ("name", "value"), [("x", value)])
        text = path.read_text()
        assert text == f"name,value\nx,{value!r}\n"
        assert float(text.splitlines()[1].split(",")[1]) == value

    def test_json_report_trailing_newline(self, tmp_path):
        path = tmp_path / "r.json"
        io.write_json_report(path, {"a": 1})
        text = path.read_text()
        assert text.endswith("}\n")
        assert json.loads(text) == {"a": 1}

    def test_sample_dir_holds_all_inputs(self):
        names = {p.name for p in sample_dir().iterdir()}
        assert {"indicators.csv", "pairwise.csv", "gdp.csv", "scenario.json",
                "train.json", "config.json", "asteroids.csv"} <= names
