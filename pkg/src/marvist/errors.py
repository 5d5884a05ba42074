"""Engine error taxonomy.

Every failure surfaced by the engine is an EngineError subclass whose class
name doubles as the stable error code printed by the CLI and returned by the
HTTP service.
"""


class EngineError(Exception):
    """Base class for all engine failures."""

    @property
    def code(self) -> str:
        return type(self).__name__


# core model
class UnknownTemplate(EngineError): ...
class EmptySelection(EngineError): ...
class UnknownGlyph(EngineError): ...
class GlyphAlreadyCollected(EngineError): ...
class EmptyCollection(EngineError): ...
class InvalidQuaternion(EngineError): ...
class IntegrityViolation(EngineError): ...


# mapping engine
class UnknownAttribute(EngineError): ...
class DuplicateMapping(EngineError): ...
class NominalChannelUnsupported(EngineError): ...
class NonPositiveFactor(EngineError): ...
class UnknownMapping(EngineError): ...
class NegativeSizeDomain(EngineError): ...
class DomainViolation(EngineError): ...


# nudging
class InapplicableRule(EngineError): ...
class FootprintOutOfFrame(EngineError): ...
class EmptyFrame(EngineError): ...


# reality simulation
class NotDetected(EngineError): ...


# scale sync
class IncompatibleChannels(EngineError): ...
class ZeroAnchorValue(EngineError): ...
class UnknownObject(EngineError): ...
class NonPositiveSourceValue(EngineError): ...


# auto-layout
class CardinalityMismatch(EngineError): ...
class DuplicateKey(EngineError): ...
class UnknownReference(EngineError): ...


# layout interactions
class NonPositiveDistance(EngineError): ...
class UnknownTarget(EngineError): ...
class DegeneratePath(EngineError): ...
class DegenerateTrace(EngineError): ...


# persistence and gallery
class RaggedRows(EngineError): ...
class UnknownTypeTag(EngineError): ...
class MissingCategories(EngineError): ...
class EmptyFile(EngineError): ...
class VersionMismatch(EngineError): ...
class NotFound(EngineError): ...
class NetworkUnavailable(EngineError): ...
class MalformedTemplate(EngineError): ...


# cli / service
class UnknownCommand(EngineError): ...
class BadArguments(EngineError): ...
class IOFailure(EngineError): ...
