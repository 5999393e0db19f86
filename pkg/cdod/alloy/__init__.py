from cdod.alloy.emitter import emit_cd_pred, emit_module, emit_od_pred

__all__ = ["emit_cd_pred", "emit_module", "emit_od_pred"]
