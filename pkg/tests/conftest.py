def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        order = [c[0] for c in test_acceptance.CRITERIA]
        for cid in order:
            if cid in test_acceptance.VERDICTS:
                terminalreporter.write_line(test_acceptance.VERDICTS[cid])
