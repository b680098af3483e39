extern "C" { int jsjforge_placeholder(void); int jsjforge_placeholder(void){return 0;} }
