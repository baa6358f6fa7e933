from statistics import fmean

from conftest import FakeStream, prefill, single_link_setup

from mlosim.mac import CW_MAX, CW_MIN, DIFS_NS, DcfState, SIFS_NS, SLOT_NS

FRAME_NS = 203_200          # 1500 B at MCS 6 / 20 MHz
ACK_HOLD_NS = 69_600        # SIFS + ACK airtime
EXCHANGE_NS = FRAME_NS + ACK_HOLD_NS


def test_spacing_relationship():
    assert DIFS_NS == SIFS_NS + 2 * SLOT_NS


def test_zero_backoff_transmits_exactly_difs_after_start():
    engine, medium, devices = single_link_setup(1)
    devices[0].dcf[1].rng = FakeStream([0])
    devices[0].on_arrival(0)
    engine.run_until(1_000_000)
    assert medium.trace[0][0] == DIFS_NS


def test_backoff_three_counts_three_idle_slots():
    engine, medium, devices = single_link_setup(1)
    devices[0].dcf[1].rng = FakeStream([3])
    devices[0].on_arrival(0)
    engine.run_until(1_000_000)
    assert medium.trace[0][0] == DIFS_NS + 3 * SLOT_NS


def test_busy_channel_defers_access():
    engine, medium, devices = single_link_setup(1)
    blocker = object()
    engine.schedule(0, lambda: medium.begin_tx(blocker, 100_000))
    devices[0].dcf[1].rng = FakeStream([0])
    engine.schedule(10_000, lambda: devices[0].on_arrival(10_000))
    engine.run_until(1_000_000)
    # Countdown waits for idle plus a full DIFS after the foreign frame ends.
    own = [e for e in medium.trace if e[2] == 1]
    assert own[0][0] == 100_000 + DIFS_NS


def test_freeze_preserves_remaining_slots():
    engine, medium, devices = single_link_setup(1)
    dcf = devices[0].dcf[1]
    dcf.rng = FakeStream([5])
    devices[0].on_arrival(0)
    # Foreign 200 us frame lands exactly three slots into the countdown.
    foreign_start = DIFS_NS + 3 * SLOT_NS
    remaining = {}
    engine.schedule(foreign_start, lambda: medium.begin_tx(object(), 200_000))
    engine.schedule(foreign_start + 1, lambda: remaining.update(frozen=dcf.backoff_remaining))
    engine.run_until(2_000_000)
    assert remaining["frozen"] == 2
    own = [e for e in medium.trace if e[2] == 1]
    assert own[0][0] == foreign_start + 200_000 + DIFS_NS + 2 * SLOT_NS


def test_two_stations_draws_zero_and_five():
    # Hand trace: A wins at DIFS, B freezes with 5 left, resumes after the
    # exchange and transmits 5 slots past the post-exchange DIFS.
    engine, medium, devices = single_link_setup(2)
    a, b = devices
    a.dcf[1].rng = FakeStream([0])
    b.dcf[1].rng = FakeStream([5])
    a.on_arrival(0)
    b.on_arrival(0)
    engine.run_until(2_000_000)
    a_start = DIFS_NS
    ack_end = a_start + EXCHANGE_NS
    b_start = ack_end + DIFS_NS + 5 * SLOT_NS
    assert medium.trace == [
        (a_start, a_start + FRAME_NS, 1, "success"),
        (b_start, b_start + FRAME_NS, 2, "success"),
    ]


def test_access_start_recorded_once_not_per_retry():
    engine, medium, devices = single_link_setup(2)
    for dev, refill in zip(devices, (3, 9)):  # collide once, then part ways
        dev.dcf[1].rng = FakeStream([0], fill=refill)
        dev.on_arrival(0)
    engine.run_until(3_000_000)
    for dev in devices:
        record = dev.delivered[0]
        assert record.access_start_ns == 0
        assert record.delivered_ns > record.access_start_ns


def test_collision_doubles_cw_and_caps(monkeypatch):
    engine, medium, devices = single_link_setup(2)
    observed = []
    original = DcfState.on_tx_end

    def spy(self, outcome, t):
        original(self, outcome, t)
        if self.owner_id == 1 and outcome == "collided":
            observed.append(self.cw)

    monkeypatch.setattr(DcfState, "on_tx_end", spy)
    for dev in devices:
        dev.dcf[1].rng = FakeStream([], fill=0)  # always redraw zero: collide forever
        dev.on_arrival(0)
    engine.run_until(10_000_000)
    # Seven retries double toward the cap; the eighth collision drops the
    # packet and resets the window for the next one.
    assert observed == [31, 63, 127, 255, 511, 1023, 1023, CW_MIN]
    assert devices[0].dropped_retry == 1
    assert devices[0].dcf[1].cw == CW_MIN


def test_cw_bounds():
    assert CW_MIN == 15
    assert CW_MAX == 1023


def test_retry_limit_drops_after_eighth_collision():
    engine, medium, devices = single_link_setup(2)
    for dev in devices:
        dev.dcf[1].rng = FakeStream([], fill=0)
        dev.on_arrival(0)
    engine.run_until(10_000_000)
    collisions = [e for e in medium.trace if e[3] == "collided"]
    assert len(collisions) == 16  # 8 rounds x 2 stations
    assert devices[0].dropped_retry == devices[1].dropped_retry == 1


def test_single_station_mean_service_interval():
    # Saturated station with no contenders: mean inter-departure time is
    # DIFS + E[backoff]*slot + frame + SIFS + ACK with E[backoff] = 7.5 slots.
    engine, medium, devices = single_link_setup(1)
    n = 10_000
    prefill(devices[0], n + 5)
    engine.run_until(6_000_000_000)
    done = [r.delivered_ns for r in devices[0].delivered]
    assert len(done) >= n
    gaps = [b - a for a, b in zip(done, done[1:n])]
    expected = DIFS_NS + 7.5 * SLOT_NS + FRAME_NS + ACK_HOLD_NS
    assert abs(fmean(gaps) - expected) <= 0.02 * expected


def test_collision_probability_increases_with_station_count():
    rates = {}
    for n in (2, 5, 10):
        engine, medium, devices = single_link_setup(n, seed=3)
        for dev in devices:
            prefill(dev, 3_000)
        engine.run_until(300_000_000)
        outcomes = [e[3] for e in medium.trace]
        rates[n] = outcomes.count("collided") / len(outcomes)
    assert rates[2] < rates[5] < rates[10]


def test_delivered_access_delay_is_positive():
    engine, medium, devices = single_link_setup(3, seed=5)
    for dev in devices:
        prefill(dev, 200)
    engine.run_until(300_000_000)
    for dev in devices:
        assert dev.delivered
        for record in dev.delivered:
            assert record.delivered_ns - record.access_start_ns > 0
