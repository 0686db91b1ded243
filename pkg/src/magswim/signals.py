"""Declarative magnetic-field control signals B(t) = (Bx(t), By(t)).

Four signal kinds form a small tagged union:

* ConstPlusSine: B(t) = B0 * R_alpha * (1, sin(w t)) -- the basic translation
  drive, rotated to an arbitrary heading.
* Rotating: B(t) = R_{w_slow t} * base(t) -- slow continuous rotation of a
  base signal (turn-in-place).
* Schedule: piecewise concatenation; each segment's signal is evaluated at
  GLOBAL time, so switching a heading rotates the ongoing waveform rather
  than restarting its phase.
* Sampled: tabulated values with linear or hold interpolation; optionally
  periodic, optionally carrying an excluded-sample mask (control inversion
  records singular samples there).

Signals serialize to/from a JSON tagged-union form for experiment manifests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SignalDomainError


def rotation(alpha: float) -> np.ndarray:
    """2D rotation matrix by angle alpha."""
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class ConstPlusSine:
    amplitude: float = 1.0
    frequency: float = 2.0 * np.pi
    heading: float = 0.0

    def __post_init__(self):
        if not self.frequency > 0:
            raise ValueError("frequency must be > 0")
        if not self.amplitude > 0:
            raise ValueError("amplitude must be > 0")

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.frequency

    def evaluate(self, t: float) -> np.ndarray:
        raw = self.amplitude * np.array([1.0, np.sin(self.frequency * t)])
        if self.heading == 0.0:
            return raw
        return rotation(self.heading) @ raw


@dataclass(frozen=True)
class Rotating:
    base: "ControlSignal"
    slow_rate: float

    @property
    def period(self) -> float | None:
        """Common period of the slow rotation and the base, when it exists."""
        if self.slow_rate == 0.0:
            return self.base.period
        slow = 2.0 * np.pi / abs(self.slow_rate)
        base = self.base.period
        if base is None:
            return None
        k = slow / base
        return slow if abs(k - round(k)) < 1e-9 else None

    def evaluate(self, t: float) -> np.ndarray:
        return rotation(self.slow_rate * t) @ self.base.evaluate(t)


@dataclass(frozen=True)
class Schedule:
    """Piecewise signal: tuple of (duration, signal), left-closed segments.

    Segment k is active on [start_k, start_k + duration_k); the final right
    endpoint is included in the last segment.  Sub-signals see global time.
    """

    segments: tuple

    def __post_init__(self):
        if not self.segments:
            raise ValueError("schedule needs at least one segment")
        for duration, _ in self.segments:
            if not duration > 0:
                raise ValueError("segment durations must be > 0")
        object.__setattr__(self, "segments", tuple(
            (float(d), s) for d, s in self.segments))

    @property
    def total_duration(self) -> float:
        return sum(d for d, _ in self.segments)

    @property
    def period(self) -> float | None:
        return None

    def evaluate(self, t: float) -> np.ndarray:
        if t < 0 or t > self.total_duration + 1e-12:
            raise SignalDomainError(
                f"t={t} outside schedule domain [0, {self.total_duration}]")
        start = 0.0
        for duration, signal in self.segments:
            if t < start + duration:
                return signal.evaluate(t)
            start += duration
        return self.segments[-1][1].evaluate(t)


@dataclass(frozen=True)
class Sampled:
    """Tabulated signal; ``values`` has shape (n, 2) matching ``times``.

    ``period`` marks the table as one period of a periodic signal: evaluation
    then wraps t modulo the period, interpolating across the seam.  The
    ``excluded`` mask flags samples rejected by control inversion.
    """

    times: np.ndarray
    values: np.ndarray
    interpolation: str = "linear"
    period: float | None = None
    excluded: np.ndarray | None = None

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.ndim != 1 or len(times) < 2:
            raise ValueError("need at least 2 samples")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times must be strictly increasing")
        if values.shape != (len(times), 2):
            raise ValueError("values must have shape (len(times), 2)")
        if self.interpolation not in ("linear", "hold"):
            raise ValueError("interpolation must be 'linear' or 'hold'")
        excluded = self.excluded
        if excluded is not None:
            excluded = np.asarray(excluded, dtype=bool)
            if excluded.shape != times.shape:
                raise ValueError("excluded mask must match times")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "excluded", excluded)

    def evaluate(self, t: float) -> np.ndarray:
        times, values = self.times, self.values
        t0 = times[0]
        if self.period is not None:
            t = t0 + (t - t0) % self.period
            # wrap the seam: append the first sample one period later
            times = np.append(times, t0 + self.period)
            values = np.vstack([values, values[0]])
        if t < times[0] - 1e-12 or t > times[-1] + 1e-12:
            raise SignalDomainError(
                f"t={t} outside sampled domain [{times[0]}, {times[-1]}]")
        i = int(np.clip(np.searchsorted(times, t, side="right") - 1,
                        0, len(times) - 2))
        if self.interpolation == "hold":
            return values[i].copy()
        dt = times[i + 1] - times[i]
        w = (t - times[i]) / dt
        return (1.0 - w) * values[i] + w * values[i + 1]


ControlSignal = ConstPlusSine | Rotating | Schedule | Sampled


def evaluate_signal(signal: ControlSignal, t: float) -> np.ndarray:
    """Evaluate any control signal at time t (exact closed form)."""
    return signal.evaluate(t)


def signal_to_json(signal: ControlSignal) -> dict:
    """Tagged-union JSON form of a signal (round-trips exactly)."""
    if isinstance(signal, ConstPlusSine):
        return {"type": "const_plus_sine", "amplitude": signal.amplitude,
                "frequency": signal.frequency, "heading": signal.heading}
    if isinstance(signal, Rotating):
        return {"type": "rotating", "base": signal_to_json(signal.base),
                "slow_rate": signal.slow_rate}
    if isinstance(signal, Schedule):
        return {"type": "schedule", "segments": [
            {"duration": d, "signal": signal_to_json(s)}
            for d, s in signal.segments]}
    if isinstance(signal, Sampled):
        out = {"type": "sampled", "times": signal.times.tolist(),
               "values": signal.values.tolist(),
               "interpolation": signal.interpolation}
        if signal.period is not None:
            out["period"] = signal.period
        if signal.excluded is not None:
            out["excluded"] = signal.excluded.tolist()
        return out
    raise TypeError(f"not a control signal: {signal!r}")


def signal_from_json(data: dict) -> ControlSignal:
    """Inverse of signal_to_json; raises ValueError on malformed input."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValueError("signal spec must be an object with a 'type' key")
    kind = data["type"]
    fields = {k: v for k, v in data.items() if k != "type"}
    try:
        if kind == "const_plus_sine":
            return ConstPlusSine(**fields)
        if kind == "rotating":
            fields["base"] = signal_from_json(fields["base"])
            return Rotating(**fields)
        if kind == "schedule":
            segments = tuple((seg["duration"], signal_from_json(seg["signal"]))
                             for seg in fields.pop("segments"))
            if fields:
                raise ValueError(f"unknown schedule keys: {sorted(fields)}")
            return Schedule(segments)
        if kind == "sampled":
            times = np.asarray(fields.pop("times"), dtype=float)
            values = np.asarray(fields.pop("values"), dtype=float)
            excluded = fields.pop("excluded", None)
            if excluded is not None:
                excluded = np.asarray(excluded, dtype=bool)
            return Sampled(times, values, excluded=excluded, **fields)
    except TypeError as exc:
        raise ValueError(f"bad '{kind}' signal spec: {exc}") from exc
    raise ValueError(f"unknown signal type {kind!r}")
