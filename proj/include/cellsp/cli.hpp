#pragma once

namespace cellsp {

int runCli(int argc, const char* const* argv);

} // namespace cellsp
