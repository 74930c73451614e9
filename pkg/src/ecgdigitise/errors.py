"""Exception types raised across the digitisation pipeline."""


class EcgDigitiseError(Exception):
    """Base class for all pipeline errors."""


# --- raster I/O ---

class UnsupportedFormat(EcgDigitiseError):
    pass


class CorruptImage(EcgDigitiseError):
    pass


class InvalidThreshold(EcgDigitiseError):
    pass


class DegenerateImage(EcgDigitiseError):
    pass


# --- rotation ---

class PointOutOfRange(EcgDigitiseError):
    pass


class NoLinesDetected(EcgDigitiseError):
    pass


class NoParallelCluster(EcgDigitiseError):
    pass


class AngleOutOfRange(EcgDigitiseError):
    pass


# --- grid calibration ---

class NoGridDetected(EcgDigitiseError):
    pass


class NonPositiveScale(EcgDigitiseError):
    pass


# --- segmentation ---

class UnboundLayout(EcgDigitiseError):
    pass


class EmptySegmentation(EcgDigitiseError):
    pass


class UnknownLeadName(EcgDigitiseError):
    pass


class DimensionMismatch(EcgDigitiseError):
    pass


class TooSparse(EcgDigitiseError):
    pass


# --- vectorisation ---

class MissingLead(EcgDigitiseError):
    def __init__(self, leads):
        self.leads = list(leads)
        super().__init__("missing leads: " + ", ".join(self.leads))


# --- scoring ---

class LengthMismatch(EcgDigitiseError):
    pass


class ZeroReference(EcgDigitiseError):
    pass


class NoCommonLeads(EcgDigitiseError):
    pass


class EmptyInput(EcgDigitiseError):
    pass


# --- rendering ---

class LayoutOverflow(EcgDigitiseError):
    pass


# --- configuration ---

class ConfigError(EcgDigitiseError):
    def __init__(self, messages):
        if isinstance(messages, str):
            messages = [messages]
        self.messages = list(messages)
        super().__init__("; ".join(self.messages))
