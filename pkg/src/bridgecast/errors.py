"""Exception hierarchy shared across the engine."""


class BridgecastError(Exception):
    """Base class for all engine errors."""


class DataError(BridgecastError):
    """Invalid or inconsistent input data (parsing, gaps, duplicates)."""


class CalendarError(BridgecastError):
    """Release-calendar configuration or lookup failure."""


class EstimationError(BridgecastError):
    """A regression or forecast step could not be carried out."""


class BacktestError(BridgecastError):
    """A backtest cell failed; message carries (quarter, day, model) context."""
