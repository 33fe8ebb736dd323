from ncverify import config, resources

def test_current_memory_fraction():
    fraction = resources.current_memory_fraction()
    assert 0 < fraction < 1

def test_matrix_cell_cap(monkeypatch):
    # Depends on the machine, so only sanity checks
    monkeypatch.setattr(config, "MATRIX_CELL_CAP", 0)
    assert resources.matrix_cell_cap() > 0

    monkeypatch.setattr(config, "MATRIX_CELL_CAP", 1234)
    assert resources.matrix_cell_cap() == 1234

def test_get_system_info():
    info = resources.get_system_info()
    assert info.startswith("-- SYSTEM INFO --")
    assert "cpu-cores" in info


if __name__ == "__main__":
    print(resources.get_system_info())
