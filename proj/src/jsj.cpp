namespace jsjforge {}
