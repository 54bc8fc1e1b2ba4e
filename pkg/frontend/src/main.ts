import { connect } from "./app.js";

const root = document.getElementById("app");
if (root) {
  const scheme = location.protocol === "https:" ? "wss" : "ws";
  connect(root, `${scheme}://${location.host}/ws`);
}
