class AbstractResultText:
    def print_report_summary(self, game, report):
        pass

    def print_sesa_summary(self, tally):
        pass

    def print_brd_result(self, profile, converged, rounds):
        pass


class ResultText(AbstractResultText):
    def print_report_summary(self, game, report):
        print(f"\nGame: {game.num_players} players, {game.num_profiles} profiles")
        print(f"Thresholds: {game.thresholds.tolist()}")
        for name, profiles in (
            ("NE", report.ne),
            ("GNE", report.gne),
            ("SE", report.se),
            ("ESE", report.ese),
        ):
            shown = sorted(profiles)[:8]
            more = " ..." if len(profiles) > len(shown) else ""
            print(f"  {name}: {len(profiles)} {shown}{more}")
        print(f"Clipping actions: {[sorted(a) for a in report.clipping]}")
        print(f"Blocking clipping action: {report.blocking_clipping}")

    def print_sesa_summary(self, tally):
        print()
        print(f"Runs: {tally.total_runs()}")
        print(f"Converged runs: {tally.converged_runs()}")
        print(f"Convergence frequency: {tally.convergence_frequency()}")
        print(f"Mean convergence time: {tally.mean_convergence_time()}")
        print(f"Distinct terminal profiles: {tally.count()}")

    def print_brd_result(self, profile, converged, rounds):
        print(f"\nBest response dynamics ended at {profile}")
        print(f"Converged: {converged} after {rounds} rounds")
