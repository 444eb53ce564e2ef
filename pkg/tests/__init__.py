import killingbeck


class TestPackage:
    def test_version(self):
        assert killingbeck.__version__

    def test_solvers_public(self):
        assert killingbeck.solve_energy
        assert killingbeck.solve_by_termination

    def test_all_exported(self):
        for name in killingbeck.__all__:
            assert hasattr(killingbeck, name), name
